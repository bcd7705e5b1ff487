// Closed-form algebra on sums of two-variable complex exponentials.

use kaon_decay::{BiExpSum, BiExpTerm, KaonParams};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = KaonParams::default();

    // e^{-Γ_L t_l - Γ_S t_r}
    let f = BiExpSum::new(vec![BiExpTerm::real(1.0, p.gamma_l, p.gamma_s)]);
    let d = f.sum_derivative();
    println!("-(d/dt_l + d/dt_r) coefficient: {:.7}", d.terms()[0].coeff.re);
    println!("mixed derivative coefficient:    {:.7e}", f.mixed_derivative().terms()[0].coeff.re);
    println!("integral over the quadrant:      {:.6}", f.integral()?.re);
    println!("mass in [0,1]x[0,1]:             {:.6e}", f.rect_integral(0.0, 1.0, 0.0, 1.0)?.re);

    // an oscillating amplitude and its modulus squared
    let amp = BiExpSum::single(Complex64::new(0.5, 0.0), p.z_short(), p.z_long())
        .add(&BiExpSum::single(Complex64::new(-0.5, 0.0), p.z_long(), p.z_short()));
    let prob = amp.modsq();
    println!("|amp|^2 has {} terms, value at (1, 1) = {:.3e}", prob.len(), prob.eval_re(1.0, 1.0));
    println!("|amp|^2 at (1, 2) = {:.6e}", prob.eval_re(1.0, 2.0));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
