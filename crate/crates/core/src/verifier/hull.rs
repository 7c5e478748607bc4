//! The admissible exponent region in the (1/p, 1/r) square.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullClass {
    Interior,
    Boundary,
    Outside,
}

impl HullClass {
    pub fn as_str(self) -> &'static str {
        match self {
            HullClass::Interior => "interior",
            HullClass::Boundary => "boundary",
            HullClass::Outside => "outside",
        }
    }

    pub fn is_inside(self) -> bool {
        self != HullClass::Outside
    }
}

/// The quadrilateral with vertices (0,0), ((k+1)/(d+1), 1/(d+1)), (1,1), (0,1).
#[derive(Debug, Clone, PartialEq)]
pub struct HullSpec {
    pub d: usize,
    pub k: usize,
    /// Counter-clockwise.
    pub vertices: [(Q, Q); 4],
}

impl HullSpec {
    pub fn new(d: usize, k: usize) -> Self {
        let d1 = d as i64 + 1;
        let zero = Q::from_integer(0);
        let one = Q::from_integer(1);
        let vertex = (Q::new(k as i64 + 1, d1), Q::new(1, d1));
        HullSpec { d, k, vertices: [(zero, zero), vertex, (one, one), (zero, one)] }
    }

    /// The restricted-type vertex ((k+1)/(d+1), 1/(d+1)).
    pub fn vertex(&self) -> (Q, Q) {
        self.vertices[1]
    }

    pub fn classify(&self, x: (Q, Q)) -> Result<HullClass> {
        let zero = Q::from_integer(0);
        let one = Q::from_integer(1);
        if x.0 < zero || x.0 > one || x.1 < zero || x.1 > one {
            return Err(Error::OutOfSquare(to_f64(x.0), to_f64(x.1)));
        }
        let mut on_edge = false;
        for i in 0..4 {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % 4];
            let cross = (b.0 - a.0) * (x.1 - a.1) - (b.1 - a.1) * (x.0 - a.0);
            if cross < zero {
                return Ok(HullClass::Outside);
            }
            if cross == zero {
                on_edge = true;
            }
        }
        Ok(if on_edge { HullClass::Boundary } else { HullClass::Interior })
    }
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Classifies `(1/p, 1/r)` against the hull for (d, k).
pub fn hull_contains(d: usize, k: usize, x: (Q, Q)) -> Result<HullClass> {
    HullSpec::new(d, k).classify(x)
}
