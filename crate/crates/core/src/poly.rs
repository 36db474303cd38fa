//! Terms of the patchwork polynomial `Σ (-1)^σ(i,j) t^ω(i,j) x^i y^j z^(d-i-j)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::lattice_points;
use crate::lifting::Lifting;
use crate::sign::SignDistribution;
use crate::triangulation::Triangulation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    /// `+1` or `-1`
    pub sign: i8,
    pub t_exp: i64,
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

/// One term per lattice point, in reverse canonical point order so that
/// degree one reads `x + y + z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polynomial {
    pub degree: u32,
    pub terms: Vec<Term>,
}

/// The triangulation only fixes the degree; whether `ω` induces it is the
/// caller's business.
pub fn emit_polynomial(
    t: &Triangulation,
    signs: &SignDistribution,
    lifting: &Lifting,
) -> Result<Polynomial> {
    let d = t.degree();
    for other in [signs.degree(), lifting.degree()] {
        if other != d {
            return Err(Error::DegreeMismatch {
                triangulation: d,
                other,
            });
        }
    }
    let terms = lattice_points(d)?
        .into_iter()
        .enumerate()
        .rev()
        .map(|(k, p)| Term {
            sign: if signs.get(k) { -1 } else { 1 },
            t_exp: lifting.values()[k],
            x: p.i as u32,
            y: p.j as u32,
            z: d - p.i as u32 - p.j as u32,
        })
        .collect();
    Ok(Polynomial { degree: d, terms })
}

fn power(f: &mut fmt::Formatter<'_>, first: &mut bool, var: &str, e: i64) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        f.write_str("*")?;
    }
    *first = false;
    if e == 1 {
        f.write_str(var)
    } else {
        write!(f, "{var}^{e}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        power(f, &mut first, "t", self.t_exp)?;
        power(f, &mut first, "x", self.x as i64)?;
        power(f, &mut first, "y", self.y as i64)?;
        power(f, &mut first, "z", self.z as i64)?;
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, term) in self.terms.iter().enumerate() {
            match (k, term.sign < 0) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}
