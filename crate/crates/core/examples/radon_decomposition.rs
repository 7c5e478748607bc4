//! Hyperplanes split into those through the origin and those missing it,
//! and each half of the Radon transform splits again into a mean term and a
//! character-sum term.
//!
//! cargo run --example radon_decomposition

use std::sync::Arc;

use ffradon::{FieldCtx, GridFunction, RadonFamily, Space};

fn main() -> ffradon::Result<()> {
    let space = Space::new(Arc::new(FieldCtx::prime(5)?), 3)?;
    let rf = RadonFamily::new(space.clone())?;
    println!("F_5^3: {} planes, {} through the origin", rf.family().len(), rf.theta_count());

    let values: Vec<f64> = (0..space.num_points()).map(|x| ((x * 7 + 3) % 11) as f64 / 10.0).collect();
    let f = GridFunction::from_real(&space, &values)?;
    let tf = rf.transform(&f)?;
    let (t0, t1) = rf.geometric_split(&f)?;
    let parts = rf.char_parts(&f)?;
    println!("max |T0 + T1 - T|     = {:.2e}", t0.add(&t1).max_abs_diff(&tf));
    println!("max |T0* + T0** - T0| = {:.2e}", parts.t0_star.add(&parts.t0_dstar).max_abs_diff(&t0));
    println!("max |T1* + T1** - T1| = {:.2e}", parts.t1_star.add(&parts.t1_dstar).max_abs_diff(&t1));

    // the Fourier route against the defining double sum
    let direct = rf.char_parts_direct(&f)?;
    println!("Fourier vs direct T1**: {:.2e}", direct.t1_dstar.max_abs_diff(&parts.t1_dstar));
    Ok(())
}
