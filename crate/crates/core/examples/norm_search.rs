//! Lower bounds on the operator norm at the vertex exponents: exhaustive or
//! hill-climbing indicator search, and the nonlinear power method.
//!
//! cargo run --release --example norm_search -- 3 2 1

use ffradon::verifier::witness::space_for;
use ffradon::verifier::{indicator_norm_search, power_iteration_norm, PowerConfig, SearchConfig};
use ffradon::{Exponent, PlaneFamily};

fn main() -> ffradon::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let q = args.first().map_or(3, |s| s.parse().expect("q"));
    let d = args.get(1).map_or(2, |s| s.parse().expect("d"));
    let k = args.get(2).map_or(1, |s| s.parse().expect("k"));

    let family = PlaneFamily::new(space_for(q, d)?, k)?;
    let (p, r) = Exponent::vertex(d, k);
    println!("F_{q}^{d}, k = {k}, p = {p}, r = {r}");

    let ind = indicator_norm_search(&family, p, r, &SearchConfig::default());
    println!(
        "indicators: {:.6} ({}, {} evaluations) at {}",
        ind.report.max_ratio,
        if ind.report.exhaustive { "exhaustive" } else { "hill climbing" },
        ind.report.iterations,
        ind.report.witness
    );

    let pow = power_iteration_norm(&family, p, r, &PowerConfig::default())?;
    println!("power method: {:.6}, converged = {}", pow.report.max_ratio, pow.report.converged);
    let f = &pow.best_function;
    let top = f.iter().cloned().fold(0.0, f64::max);
    let profile: Vec<String> = f.iter().take(12).map(|v| format!("{:.2}", v / top)).collect();
    println!("best f / max f, first points: [{}]", profile.join(", "));
    Ok(())
}
