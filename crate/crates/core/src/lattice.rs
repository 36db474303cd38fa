//! Lattice points of the dilated standard triangle `d·Δ₂` and the
//! canonical point order shared by every sign codec.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `ℤ²`. `i` is the x-exponent, `j` the y-exponent.
///
/// Reflected (diamond) points may carry negative coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct LatticePoint {
    pub i: i32,
    pub j: i32,
}

impl LatticePoint {
    pub const fn new(i: i32, j: i32) -> Self {
        LatticePoint { i, j }
    }

    /// Membership in `A(d) = {(i, j) : i, j ≥ 0, i + j ≤ d}`.
    pub fn in_triangle(self, degree: u32) -> bool {
        self.i >= 0 && self.j >= 0 && (self.i as i64 + self.j as i64) <= degree as i64
    }

    pub fn neg(self) -> Self {
        LatticePoint::new(-self.i, -self.j)
    }

    /// `|i| + |j|`, the diamond norm.
    pub fn l1(self) -> i32 {
        self.i.abs() + self.j.abs()
    }
}

impl From<[i32; 2]> for LatticePoint {
    fn from([i, j]: [i32; 2]) -> Self {
        LatticePoint { i, j }
    }
}

impl From<LatticePoint> for [i32; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.i, p.j]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// `|A(d)| = (d+1)(d+2)/2`.
pub const fn num_points(degree: u32) -> usize {
    let d = degree as usize;
    (d + 1) * (d + 2) / 2
}

/// Harnack's bound `M(d) = (d-1)(d-2)/2 + 1` on the number of curve components.
pub const fn harnack_bound(degree: u32) -> usize {
    let d = degree as usize;
    if d < 2 {
        1
    } else {
        (d - 1) * (d - 2) / 2 + 1
    }
}

pub(crate) fn check_degree(degree: u32) -> Result<()> {
    if degree < 1 {
        Err(Error::InvalidDegree(degree as i64))
    } else {
        Ok(())
    }
}

/// All points of `A(d)`, sorted lexicographically by `(i, j)`.
///
/// The position of a point in this list is its canonical index.
pub fn lattice_points(degree: u32) -> Result<Vec<LatticePoint>> {
    check_degree(degree)?;
    let d = degree as i32;
    let mut out = Vec::with_capacity(num_points(degree));
    for i in 0..=d {
        for j in 0..=(d - i) {
            out.push(LatticePoint::new(i, j));
        }
    }
    Ok(out)
}

/// Canonical index of `p` in `A(d)`, or `None` when `p ∉ A(d)`.
pub fn point_index(degree: u32, p: LatticePoint) -> Option<usize> {
    if !p.in_triangle(degree) {
        return None;
    }
    let d = degree as usize;
    let i = p.i as usize;
    // rows i' < i hold (d - i' + 1) points each
    let offset = i * (d + 1) - i * (i.saturating_sub(1)) / 2;
    Some(offset + p.j as usize)
}

/// Twice the signed area of the triangle `abc` (positive when counter-clockwise).
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    let (ax, ay) = (a.i as i64, a.j as i64);
    let (bx, by) = (b.i as i64, b.j as i64);
    let (cx, cy) = (c.i as i64, c.j as i64);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Proper crossing of the open segments `ab` and `cd`.
pub(crate) fn segments_cross(
    a: LatticePoint,
    b: LatticePoint,
    c: LatticePoint,
    d: LatticePoint,
) -> bool {
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    o1 * o2 < 0 && o3 * o4 < 0
}
