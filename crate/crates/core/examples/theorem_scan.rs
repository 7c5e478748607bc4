//! Vertex boundedness scan: the largest ratio found per q, and its spread.
//!
//! cargo run --release --example theorem_scan -- 2 1 2,3,5,7 1000

use ffradon::verifier::{theorem_scan, ScanConfig};

fn main() -> ffradon::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d = args.first().map_or(2, |s| s.parse().expect("d"));
    let k = args.get(1).map_or(1, |s| s.parse().expect("k"));
    let qs = args.get(2).map_or(vec![2, 3, 5, 7], |s| s.split(',').map(|q| q.parse().expect("q")).collect());
    let mut cfg = ScanConfig::new(qs, d, k);
    cfg.trials = args.get(3).map_or(1000, |s| s.parse().expect("trials"));

    let out = theorem_scan(&cfg)?;
    for rep in &out.reports {
        println!(
            "q={:<3} {:<9} ratio={:.6} exhaustive={} iters={} {}ms  {}",
            rep.q,
            rep.method.as_str(),
            rep.max_ratio,
            rep.exhaustive,
            rep.iterations,
            rep.elapsed_ms,
            rep.witness.chars().take(60).collect::<String>()
        );
    }
    println!("spread = {:.4}", out.spread);
    for v in out.violations() {
        println!("violation: {v}");
    }
    Ok(())
}
