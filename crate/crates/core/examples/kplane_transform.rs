//! The line transform in F_3^2: averages of a function over all 12 lines,
//! and the adjoint pairing <Tf, g> = <f, T*g>.
//!
//! cargo run --example kplane_transform

use std::sync::Arc;

use ffradon::{FieldCtx, GridFunction, PlaneFamily, PlaneFunction, Point, Space};

fn main() -> ffradon::Result<()> {
    let space = Space::new(Arc::new(FieldCtx::prime(3)?), 2)?;
    let family = PlaneFamily::new(space.clone(), 1)?;
    println!("{} lines of {} points each", family.len(), family.plane_size());

    let origin = space.rank(&Point::from_codes(&[0, 0]));
    let diag = space.rank(&Point::from_codes(&[1, 1]));
    let f = GridFunction::indicator(&space, &[origin, diag])?;
    let tf = family.transform(&f)?;
    for (flat, v) in family.flats().iter().zip(tf.values()) {
        println!("{:<34} {:.4}", flat.descriptor(), v.re);
    }

    let g = PlaneFunction::from_values(&family, (0..family.len()).map(|i| (i as f64).into()).collect())?;
    let lhs = family.inner(&tf, &g);
    let rhs = ffradon::transforms::grid_inner(&f, &family.adjoint(&g)?);
    println!("<Tf, g> = {:.6}, <f, T*g> = {:.6}", lhs.re, rhs.re);
    Ok(())
}
