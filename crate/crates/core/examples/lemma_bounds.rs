//! Explicit sup and L^2 bounds for the character-sum parts on random sets,
//! plus the diagonal/off-diagonal split of the L^2 norm.
//!
//! cargo run --release --example lemma_bounds -- 5 3 200

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffradon::verifier::lemma_suite;
use ffradon::verifier::witness::space_for;
use ffradon::RadonFamily;

fn main() -> ffradon::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let q = args.first().map_or(3, |s| s.parse().expect("q"));
    let d = args.get(1).map_or(2, |s| s.parse().expect("d"));
    let trials = args.get(2).map_or(200, |s| s.parse().expect("trials"));

    let rf = RadonFamily::new(space_for(q, d)?)?;
    let single = lemma_suite(&rf, &[0], true)?;
    println!(
        "E = {{0}}: |T0**E|_2^2 = {:.6} <= {:.6}, sup {:.4} <= {:.4}",
        single.t0_l2_sq, single.l2_bound, single.t0_sup, single.sup_bound
    );

    let n = rf.space().num_points();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst, mut failures) = (0.0f64, 0);
    for _ in 0..trials {
        let size = rng.gen_range(1..=n);
        let set = rand::seq::index::sample(&mut rng, n, size).into_vec();
        let rep = lemma_suite(&rf, &set, false)?;
        worst = worst.max(rep.t1_l2_sq / rep.l2_bound);
        failures += usize::from(!rep.passes());
        assert!((rep.off_diag - rep.off_diag_closed).abs() < 1e-12);
    }
    println!("{trials} random sets in F_{q}^{d}: worst |T1**E|^2 / bound = {worst:.4}, {failures} failures");
    Ok(())
}
