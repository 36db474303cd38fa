//! Triangulations of `A(d)` given by their edge lists.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lattice::{
    check_degree, lattice_points, num_points, orient, point_index, segments_cross, LatticePoint,
};
use crate::sign::SignDistribution;
use crate::symmetry::SymmetryElement;

/// A triangulation of the lattice points of `d·Δ₂`.
///
/// Edges and triangles are stored as canonical point indices, each pair or
/// triple sorted ascending and the lists sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    degree: u32,
    edges: Vec<[u32; 2]>,
    triangles: Vec<[u32; 3]>,
}

/// Number of edges of a unimodular triangulation of `d·Δ₂`.
pub const fn unimodular_edge_count(degree: u32) -> usize {
    let d = degree as usize;
    (3 * d * d + 3 * d) / 2
}

impl Triangulation {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Edges as sorted pairs of canonical point indices.
    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    /// Triangles as sorted triples of canonical point indices.
    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        lattice_points(self.degree).expect("degree validated at construction")
    }

    pub fn edge_points(&self) -> Vec<(LatticePoint, LatticePoint)> {
        let pts = self.points();
        self.edges
            .iter()
            .map(|&[a, b]| (pts[a as usize], pts[b as usize]))
            .collect()
    }

    pub fn triangle_points(&self) -> Vec<[LatticePoint; 3]> {
        let pts = self.points();
        self.triangles
            .iter()
            .map(|t| t.map(|k| pts[k as usize]))
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        let pts = self.points();
        self.triangles.len() == (self.degree * self.degree) as usize
            && self.triangles.iter().all(|&[a, b, c]| {
                orient(pts[a as usize], pts[b as usize], pts[c as usize]).abs() == 1
            })
    }

    /// Builds a triangulation from index edges, reconstructing unit triangles.
    /// No validation beyond what reconstruction needs.
    pub(crate) fn from_index_edges(degree: u32, mut edges: Vec<[u32; 2]>) -> Triangulation {
        for e in edges.iter_mut() {
            e.sort_unstable();
        }
        edges.sort_unstable();
        edges.dedup();
        let pts = lattice_points(degree).expect("valid degree");
        let triangles = reconstruct_triangles(&pts, &edges, |a, b, c| orient(a, b, c).abs() == 1);
        Triangulation {
            degree,
            edges,
            triangles,
        }
    }

    /// Accepts any in-range edge list without checking planarity or
    /// unimodularity. Triangles are the non-degenerate 3-cliques that contain
    /// no other vertex; lattice points no edge uses are ignored.
    pub fn from_edges_unchecked(
        degree: u32,
        edges: &[(LatticePoint, LatticePoint)],
    ) -> Result<Triangulation> {
        check_degree(degree)?;
        let mut idx = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let ia = point_index(degree, a).ok_or(Error::PointOutOfRange { point: a, degree })?;
            let ib = point_index(degree, b).ok_or(Error::PointOutOfRange { point: b, degree })?;
            if ia != ib {
                idx.push([ia.min(ib) as u32, ia.max(ib) as u32]);
            }
        }
        idx.sort_unstable();
        idx.dedup();
        let pts = lattice_points(degree)?;
        let mut used: Vec<LatticePoint> = idx.iter().flatten().map(|&k| pts[k as usize]).collect();
        used.sort_unstable();
        used.dedup();
        let triangles = reconstruct_triangles(&pts, &idx, |a, b, c| {
            let area = orient(a, b, c);
            area != 0
                && used
                    .iter()
                    .all(|&p| p == a || p == b || p == c || !in_closed_triangle(a, b, c, p))
        });
        Ok(Triangulation {
            degree,
            edges: idx,
            triangles,
        })
    }

    /// Interior edges (shared by two triangles) with their two opposite vertices.
    pub(crate) fn interior_edges(&self) -> Vec<([u32; 2], [u32; 2])> {
        let n = num_points(self.degree);
        let mut opposite: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for &[a, b, c] in &self.triangles {
            for (u, v, w) in [(a, b, c), (a, c, b), (b, c, a)] {
                opposite[u as usize].push((v, w));
            }
        }
        let mut out = Vec::new();
        for &[a, b] in &self.edges {
            let mut opp = opposite[a as usize]
                .iter()
                .filter(|&&(v, _)| v == b)
                .map(|&(_, w)| w);
            if let (Some(c), Some(e)) = (opp.next(), opp.next()) {
                out.push(([a, b], [c.min(e), c.max(e)]));
            }
        }
        out
    }

    /// All triangulations one flip away, paired with the flipped edge.
    pub fn flip_neighbors(&self) -> Vec<((LatticePoint, LatticePoint), Triangulation)> {
        let pts = self.points();
        let mut out = Vec::new();
        for ([a, b], [c, e]) in self.interior_edges() {
            let (pa, pb, pc, pe) = (
                pts[a as usize],
                pts[b as usize],
                pts[c as usize],
                pts[e as usize],
            );
            // strictly convex quad ⇔ the new diagonal separates a and b
            if orient(pc, pe, pa).signum() * orient(pc, pe, pb).signum() >= 0 {
                continue;
            }
            let mut edges: Vec<[u32; 2]> = self
                .edges
                .iter()
                .copied()
                .filter(|&x| x != [a, b])
                .collect();
            edges.push([c, e]);
            out.push((
                (pa, pb),
                Triangulation::from_index_edges(self.degree, edges),
            ));
        }
        out
    }

    /// Image of the triangulation under a symmetry element.
    pub fn transform(&self, g: SymmetryElement) -> Triangulation {
        let d = self.degree;
        let pts = self.points();
        let map: Vec<u32> = pts
            .iter()
            .map(|&p| point_index(d, g.apply(d, p)).expect("symmetry preserves A(d)") as u32)
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| e.map(|k| map[k as usize]))
            .collect();
        Triangulation::from_index_edges(d, edges)
    }

    /// Fixed by `τ(i, j) = (j, i)`.
    pub fn is_transpose_symmetric(&self) -> bool {
        self.transform(SymmetryElement::TRANSPOSE).edges == self.edges
    }
}

fn in_closed_triangle(a: LatticePoint, b: LatticePoint, c: LatticePoint, p: LatticePoint) -> bool {
    let s = orient(a, b, c).signum();
    orient(a, b, p) * s >= 0 && orient(b, c, p) * s >= 0 && orient(c, a, p) * s >= 0
}

fn reconstruct_triangles(
    pts: &[LatticePoint],
    edges: &[[u32; 2]],
    mut accept: impl FnMut(LatticePoint, LatticePoint, LatticePoint) -> bool,
) -> Vec<[u32; 3]> {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); pts.len()];
    for &[a, b] in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    let mut tris = Vec::new();
    for &[a, b] in edges {
        // common neighbours above b, so each triangle is found once
        let (la, lb) = (&adj[a as usize], &adj[b as usize]);
        let (mut x, mut y) = (0, 0);
        while x < la.len() && y < lb.len() {
            match la[x].cmp(&lb[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    let c = la[x];
                    if c > b && accept(pts[a as usize], pts[b as usize], pts[c as usize]) {
                        tris.push([a, b, c]);
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
    }
    tris.sort_unstable();
    tris
}

/// Validates an edge list as a unimodular triangulation of `A(d)` and
/// reconstructs its triangles.
pub fn validate_triangulation(
    degree: u32,
    edges: &[(LatticePoint, LatticePoint)],
) -> Result<Triangulation> {
    check_degree(degree)?;
    let pts = lattice_points(degree)?;
    let mut seen = HashSet::with_capacity(edges.len());
    let mut idx = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        let ia = point_index(degree, a).ok_or(Error::PointOutOfRange { point: a, degree })?;
        let ib = point_index(degree, b).ok_or(Error::PointOutOfRange { point: b, degree })?;
        if ia == ib {
            return Err(Error::NotATriangulation(format!("degenerate edge {a}-{b}")));
        }
        let key = [ia.min(ib) as u32, ia.max(ib) as u32];
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge { a, b });
        }
        idx.push(key);
    }

    let mut used = vec![false; pts.len()];
    for &[a, b] in &idx {
        used[a as usize] = true;
        used[b as usize] = true;
    }

    // an edge may not run through a vertex of the triangulation
    for &[a, b] in &idx {
        let (pa, pb) = (pts[a as usize], pts[b as usize]);
        if let Some(p) =
            lattice_points_between(pa, pb).find(|&p| used[point_index(degree, p).unwrap()])
        {
            return Err(Error::NotATriangulation(format!(
                "edge {pa}-{pb} passes through vertex {p}"
            )));
        }
    }

    for (x, &[a, b]) in idx.iter().enumerate() {
        let (pa, pb) = (pts[a as usize], pts[b as usize]);
        for &[c, e] in &idx[x + 1..] {
            let (pc, pe) = (pts[c as usize], pts[e as usize]);
            if segments_cross(pa, pb, pc, pe) {
                return Err(Error::NotATriangulation(format!(
                    "edges {pa}-{pb} and {pc}-{pe} cross"
                )));
            }
        }
    }

    if let Some(k) = used.iter().position(|&u| !u) {
        return Err(Error::NotUnimodular(format!(
            "point {} is not a vertex",
            pts[k]
        )));
    }
    let expected = unimodular_edge_count(degree);
    if idx.len() != expected {
        return Err(Error::NotUnimodular(format!(
            "{} edges, a unimodular triangulation of degree {degree} has {expected}",
            idx.len()
        )));
    }

    let tri = Triangulation::from_index_edges(degree, idx);
    if tri.triangles.len() != (degree * degree) as usize {
        return Err(Error::NotATriangulation(format!(
            "{} unit triangles found, expected {}",
            tri.triangles.len(),
            degree * degree
        )));
    }
    let mut edge_use = vec![0u8; tri.edges.len()];
    for &[a, b, c] in &tri.triangles {
        for e in [[a, b], [a, c], [b, c]] {
            let k = tri
                .edges
                .binary_search(&e)
                .expect("triangle edges are edges");
            edge_use[k] += 1;
        }
    }
    for (k, &[a, b]) in tri.edges.iter().enumerate() {
        let (pa, pb) = (pts[a as usize], pts[b as usize]);
        let boundary = on_hull_side(degree, pa, pb);
        let want = if boundary { 1 } else { 2 };
        if edge_use[k] != want {
            return Err(Error::NotATriangulation(format!(
                "edge {pa}-{pb} borders {} triangles, expected {want}",
                edge_use[k]
            )));
        }
    }
    Ok(tri)
}

/// Both endpoints on the same side of the hull of `d·Δ₂`.
pub(crate) fn on_hull_side(degree: u32, a: LatticePoint, b: LatticePoint) -> bool {
    let d = degree as i32;
    (a.i == 0 && b.i == 0) || (a.j == 0 && b.j == 0) || (a.i + a.j == d && b.i + b.j == d)
}

fn lattice_points_between(a: LatticePoint, b: LatticePoint) -> impl Iterator<Item = LatticePoint> {
    let (dx, dy) = (b.i - a.i, b.j - a.j);
    let g = gcd(dx.unsigned_abs(), dy.unsigned_abs()) as i32;
    let (sx, sy) = if g == 0 { (0, 0) } else { (dx / g, dy / g) };
    (1..g).map(move |k| LatticePoint::new(a.i + k * sx, a.j + k * sy))
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Maps a triangulation and optional sign distribution through `g`, with
/// `σ'(g(p)) = σ(p)`.
pub fn apply_symmetry(
    t: &Triangulation,
    signs: Option<&SignDistribution>,
    g: SymmetryElement,
) -> Result<(Triangulation, Option<SignDistribution>)> {
    let d = t.degree;
    let image = t.transform(g);
    let signs = match signs {
        None => None,
        Some(s) => {
            if s.degree() != d {
                return Err(Error::DegreeMismatch {
                    triangulation: d,
                    other: s.degree(),
                });
            }
            let mut out = SignDistribution::zeros(d)?;
            for (k, p) in t.points().into_iter().enumerate() {
                let target = point_index(d, g.apply(d, p)).expect("symmetry preserves A(d)");
                out.set(target, s.get(k));
            }
            Some(out)
        }
    };
    Ok((image, signs))
}
