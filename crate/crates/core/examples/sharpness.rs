//! Hull membership against witness growth exponents on a (1/p, 1/r) grid.
//!
//! cargo run --release --example sharpness -- 2 1 3,5,7,11 21

use ffradon::verifier::sharpness_grid;

fn main() -> ffradon::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d = args.first().map_or(2, |s| s.parse().expect("d"));
    let k = args.get(1).map_or(1, |s| s.parse().expect("k"));
    let qs: Vec<u64> = args.get(2).map_or(vec![3, 5, 7, 11], |s| s.split(',').map(|q| q.parse().expect("q")).collect());
    let res = args.get(3).map_or(21, |s| s.parse().expect("resolution"));

    let out = sharpness_grid(d, k, &qs, res)?;
    // one character per grid point, 1/r increasing upward
    let m = res - 1;
    for j in (0..res).rev() {
        let row: String = (0..res)
            .map(|i| {
                let pt = &out.points[i * res + j];
                match (pt.class.is_inside(), pt.violation().is_some()) {
                    (_, true) => '!',
                    (true, _) => '#',
                    (false, _) => '.',
                }
            })
            .collect();
        println!("{:>5.2} {row}", j as f64 / m as f64);
    }
    println!("'#' inside or boundary, '.' outside, '!' incoherent");
    println!("{} violations", out.violations.len());
    for v in out.violations.iter().take(20) {
        println!("  {v}");
    }
    Ok(())
}
