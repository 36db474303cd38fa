//! The reflected triangulation on the diamond `|i| + |j| ≤ d` and the
//! parity rule that extends signs to it.

use crate::error::{Error, Result};
use crate::lattice::{point_index, LatticePoint};
use crate::sign::SignDistribution;
use crate::triangulation::Triangulation;

/// `T⋄`: the triangulation reflected into all four quadrants, with the
/// antipodal pairing of boundary vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondComplex {
    degree: u32,
    vertices: Vec<LatticePoint>,
    edges: Vec<[u32; 2]>,
    triangles: Vec<[u32; 3]>,
    antipodal_pairs: Vec<[u32; 2]>,
    /// canonical index in `A(d)` of `(|i|, |j|)`
    source: Vec<u32>,
    /// parity added by the reflection rule
    flip: Vec<u8>,
}

fn diamond_points(degree: u32) -> Vec<LatticePoint> {
    let d = degree as i32;
    let mut out = Vec::with_capacity(diamond_size(degree));
    for i in -d..=d {
        let r = d - i.abs();
        for j in -r..=r {
            out.push(LatticePoint::new(i, j));
        }
    }
    out
}

/// `|A⋄| = 2d² + 2d + 1`.
pub const fn diamond_size(degree: u32) -> usize {
    let d = degree as usize;
    2 * d * d + 2 * d + 1
}

/// Lookup from diamond point to vertex index.
struct DiamondIndex {
    d: i32,
    table: Vec<u32>,
}

impl DiamondIndex {
    fn new(degree: u32, vertices: &[LatticePoint]) -> Self {
        let d = degree as i32;
        let w = (2 * d + 1) as usize;
        let mut table = vec![u32::MAX; w * w];
        for (k, v) in vertices.iter().enumerate() {
            table[(v.i + d) as usize * w + (v.j + d) as usize] = k as u32;
        }
        DiamondIndex { d, table }
    }

    fn get(&self, p: LatticePoint) -> u32 {
        let w = (2 * self.d + 1) as usize;
        self.table[(p.i + self.d) as usize * w + (p.j + self.d) as usize]
    }
}

const QUADRANTS: [(i32, i32); 4] = [(1, 1), (-1, 1), (1, -1), (-1, -1)];

/// Reflects `t` through both axes and the origin.
pub fn reflect(t: &Triangulation) -> DiamondComplex {
    let degree = t.degree();
    let d = degree as i32;
    let vertices = diamond_points(degree);
    let index = DiamondIndex::new(degree, &vertices);
    let pts = t.points();

    let mut edges = Vec::with_capacity(4 * t.edges().len());
    for &[a, b] in t.edges() {
        let (pa, pb) = (pts[a as usize], pts[b as usize]);
        for (sx, sy) in QUADRANTS {
            let x = index.get(LatticePoint::new(sx * pa.i, sy * pa.j));
            let y = index.get(LatticePoint::new(sx * pb.i, sy * pb.j));
            edges.push([x.min(y), x.max(y)]);
        }
    }
    // edges on the axes appear twice
    edges.sort_unstable();
    edges.dedup();

    let mut triangles = Vec::with_capacity(4 * t.triangles().len());
    for tri in t.triangles() {
        for (sx, sy) in QUADRANTS {
            let mut img = tri.map(|k| {
                let p = pts[k as usize];
                index.get(LatticePoint::new(sx * p.i, sy * p.j))
            });
            img.sort_unstable();
            triangles.push(img);
        }
    }
    triangles.sort_unstable();

    let mut antipodal_pairs = Vec::with_capacity(2 * degree as usize);
    for (k, v) in vertices.iter().enumerate() {
        if v.l1() == d {
            let w = index.get(v.neg()) as usize;
            if k < w {
                antipodal_pairs.push([k as u32, w as u32]);
            }
        }
    }

    let mut source = Vec::with_capacity(vertices.len());
    let mut flip = Vec::with_capacity(vertices.len());
    for v in &vertices {
        let base = LatticePoint::new(v.i.abs(), v.j.abs());
        source.push(point_index(degree, base).expect("first-quadrant image lies in A(d)") as u32);
        let mut parity = 0;
        if v.i < 0 {
            parity ^= v.i.unsigned_abs() & 1;
        }
        if v.j < 0 {
            parity ^= v.j.unsigned_abs() & 1;
        }
        flip.push(parity as u8);
    }

    DiamondComplex {
        degree,
        vertices,
        edges,
        triangles,
        antipodal_pairs,
        source,
        flip,
    }
}

impl DiamondComplex {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    /// The `2d` pairs `(v, -v)` with `|v|₁ = d`, lower index first.
    pub fn antipodal_pairs(&self) -> &[[u32; 2]] {
        &self.antipodal_pairs
    }

    pub fn vertex_index(&self, p: LatticePoint) -> Option<usize> {
        if p.l1() > self.degree as i32 {
            return None;
        }
        self.vertices.binary_search(&p).ok()
    }

    /// Writes the extended sign of every vertex into `out` (0 = `+`, 1 = `-`).
    pub(crate) fn extend_into(&self, signs: &SignDistribution, out: &mut [u8]) {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = signs.get(self.source[k] as usize) as u8 ^ self.flip[k];
        }
    }
}

/// Extends `σ` from `A(d)` to the diamond:
/// `σ(i,-j) = σ(i,j) + j`, `σ(-i,j) = σ(i,j) + i`, `σ(-i,-j) = σ(i,j) + i + j` (mod 2).
pub fn extend_signs(diamond: &DiamondComplex, signs: &SignDistribution) -> Result<Vec<bool>> {
    if signs.degree() != diamond.degree {
        return Err(Error::DegreeMismatch {
            triangulation: diamond.degree,
            other: signs.degree(),
        });
    }
    let mut out = vec![0u8; diamond.vertices.len()];
    diamond.extend_into(signs, &mut out);
    Ok(out.into_iter().map(|b| b == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{from_lifting, Lifting};
    use crate::triangulation::unimodular_edge_count;

    fn p(i: i32, j: i32) -> LatticePoint {
        LatticePoint::new(i, j)
    }

    #[test]
    fn degree_one_counts() {
        let t = from_lifting(&Lifting::zero(1).unwrap());
        let dc = reflect(&t);
        assert_eq!(dc.vertices().len(), 5);
        assert_eq!(dc.edges().len(), 8);
        assert_eq!(dc.triangles().len(), 4);
        assert_eq!(dc.antipodal_pairs().len(), 2);
    }

    #[test]
    fn edge_counts_by_degree() {
        for d in 1..=10 {
            let t = from_lifting(&Lifting::quadratic(d).unwrap());
            let dc = reflect(&t);
            assert_eq!(dc.vertices().len(), diamond_size(d));
            assert_eq!(
                dc.edges().len(),
                4 * unimodular_edge_count(d) - 4 * d as usize
            );
            assert_eq!(dc.triangles().len(), 4 * (d * d) as usize);
            assert_eq!(dc.antipodal_pairs().len(), 2 * d as usize);
            for &[a, b] in dc.antipodal_pairs() {
                assert_eq!(dc.vertices()[a as usize], dc.vertices()[b as usize].neg());
            }
        }
    }

    #[test]
    fn sign_extension_rule() {
        let t = from_lifting(&Lifting::zero(3).unwrap());
        let dc = reflect(&t);
        let mut s = SignDistribution::zeros(3).unwrap();
        let full = extend_signs(&dc, &s).unwrap();
        let at = |full: &[bool], q: LatticePoint| full[dc.vertex_index(q).unwrap()];
        // σ(1,1) = 0 ⇒ σ(-1,1) = 1
        assert!(!at(&full, p(1, 1)));
        assert!(at(&full, p(-1, 1)));
        // σ(2,0) = 0 ⇒ σ(-2,0) = 0
        assert!(!at(&full, p(-2, 0)));
        // σ(1,2) = 1 ⇒ σ(-1,-2) = 1 + 1 + 2 = 0
        s.set(point_index(3, p(1, 2)).unwrap(), true);
        let full = extend_signs(&dc, &s).unwrap();
        assert!(at(&full, p(1, 2)));
        assert!(!at(&full, p(-1, -2)));
        assert!(at(&full, p(1, -2)));
    }

    #[test]
    fn antipodal_signs_differ_exactly_for_odd_degree() {
        for d in 1..=6 {
            let t = from_lifting(&Lifting::zero(d).unwrap());
            let dc = reflect(&t);
            let s = SignDistribution::zeros(d).unwrap();
            let full = extend_signs(&dc, &s).unwrap();
            for &[a, b] in dc.antipodal_pairs() {
                assert_eq!(full[a as usize] != full[b as usize], d % 2 == 1);
            }
        }
    }
}
