//! Counting (d+1)-tuples by the dimension of their affine span.
//!
//! cargo run --example incidence_counts

use ffradon::verifier::witness::space_for;
use ffradon::verifier::{delta_incidence_count, incidence_check, l_class_count, random_set_family, CountMode};
use ffradon::Point;

fn main() -> ffradon::Result<()> {
    let space = space_for(3, 2)?;
    // every set is the line y = 0
    let line: Vec<usize> = (0..3).map(|x| space.rank(&Point::from_codes(&[x, 0]))).collect();
    let sets = vec![line.clone(), line.clone(), line];
    let rep = incidence_check(&space, &sets)?;
    println!("line family: delta = {:?}, L = {:?}", rep.delta, rep.l_classes);
    println!("L(1) = {} (tuples whose span becomes a line at the second point)", l_class_count(&space, 1, &sets)?);

    for seed in 0..5 {
        let sets = random_set_family(&space, 5, seed);
        let rep = incidence_check(&space, &sets)?;
        println!(
            "seed {seed}: sizes {:?} delta {:?} L {:?} ok={}",
            rep.sizes,
            rep.delta,
            rep.l_classes,
            rep.violations.is_empty()
        );
    }

    // Monte Carlo against the exact count on a larger family
    let big = space_for(7, 3)?;
    let sets = random_set_family(&big, 40, 9);
    let exact = delta_incidence_count(&big, 2, &sets, CountMode::Exact)?;
    let est = delta_incidence_count(&big, 2, &sets, CountMode::MonteCarlo { samples: 20_000, seed: 1 })?;
    println!("F_7^3 delta(2): exact {exact:?}, sampled {est:?}");
    Ok(())
}
