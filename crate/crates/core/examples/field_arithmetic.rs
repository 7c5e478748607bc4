//! Arithmetic, trace and additive characters in F_9 = F_3[t]/(t^2 + 1).
//!
//! cargo run --example field_arithmetic

use ffradon::{ArithOp, Elem, FieldCtx};

fn main() -> ffradon::Result<()> {
    let f = FieldCtx::new(3, 2, None)?;
    println!("F_{}: modulus coefficients (low first) {:?}", f.q(), f.modulus());

    // codes are base-p digits: 5 = 2 + 1*3 is 2 + t
    let a = f.encode(&[2, 1])?;
    let b = f.encode(&[0, 1])?;
    println!("a = {:?}, b = {:?} (t)", f.decode(a), f.decode(b));
    println!("a + b = {:?}", f.decode(f.add(a, b)));
    println!("a * b = {:?}", f.decode(f.mul(a, b)));
    println!("b^2   = {:?}  (t^2 = -1)", f.decode(f.arith(b, ArithOp::Pow(2))?));
    println!("a^-1  = {:?}", f.decode(f.inv(a)?));
    println!("1/0   -> {}", f.inv(Elem::ZERO).unwrap_err());

    println!("\n x   Tr(x)  chi(x)");
    for x in f.elements() {
        let c = f.chi(x);
        println!("{:>2}   {}     {:+.4}{:+.4}i", x.code(), f.absolute_trace(x), c.re, c.im);
    }

    // orthogonality: the sum of chi(a s) over s is q at a = 0 and vanishes otherwise
    for a in [Elem::ZERO, Elem::ONE, a] {
        let s = f.character_sum(a);
        println!("sum_s chi({} s) = {:.3e}", a.code(), s.norm());
    }
    Ok(())
}
