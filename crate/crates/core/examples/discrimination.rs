// How many events separate two prescriptions: KL divergence and sample size.

use kaon_decay::{
    discriminate, joint_density, sample_events, ApproachKind, EntangledStateSpec, GridSpec, KaonParams,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = KaonParams::default();
    let bins = GridSpec::uniform(10.0, 21)?;
    for state in [EntangledStateSpec::singlet(), EntangledStateSpec::Beta(0.0)] {
        let h = joint_density(ApproachKind::Hybrid, &state, &p, "12".parse()?)?;
        let t = joint_density(ApproachKind::TimeOperator, &state, &p, "12".parse()?)?;
        let report = discriminate(&h, &t, 5.0, None, &bins)?;
        println!(
            "{state} ch 12: KL(hybrid||time-op) = {:.6}, reverse {:.6}, events for 5 sigma: {}",
            report.kl_pq, report.kl_qp, report.n_required
        );
    }

    // hybrid events tested against the time-operator model
    let state = EntangledStateSpec::Beta(0.0);
    let h = joint_density(ApproachKind::Hybrid, &state, &p, "12".parse()?)?;
    let t = joint_density(ApproachKind::TimeOperator, &state, &p, "12".parse()?)?;
    let events = sample_events(&h, 2000, 3)?;
    let report = discriminate(&h, &t, 5.0, Some(&events), &bins)?;
    println!(
        "2000 hybrid events vs time-op model: chi2 = {:.1}, dof = {}, p = {:.2e}",
        report.chi2.unwrap_or(f64::NAN),
        report.dof.unwrap_or(0),
        report.p_value.unwrap_or(f64::NAN)
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
