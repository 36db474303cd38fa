//! Slow reference classifier used to cross-check [`crate::classify`].
//!
//! Works on the cell complex cut out by the curve itself: each triangle of the
//! reflected triangulation is one piece, or two when the curve passes through
//! it. Regions are flood filled over pieces, curve components are traced
//! segment by segment, and the non-orientable region is found by carrying an
//! orientation bit across the antipodal gluing.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::classify::ClassificationResult;
use crate::error::{Error, Result};
use crate::lattice::harnack_bound;
use crate::scheme::SchemeTree;
use crate::sign::SignDistribution;
use crate::triangulation::Triangulation;

type Pt = (i32, i32);
type Seg = (Pt, Pt);

fn seg(a: Pt, b: Pt) -> Seg {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn neg(p: Pt) -> Pt {
    (-p.0, -p.1)
}

/// A piece of the boundary of a 2-cell: a whole uncrossed edge, or the half
/// of a crossed edge next to the given endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Slot {
    Whole(Seg),
    Half(Seg, Pt),
}

impl Slot {
    fn antipode(self) -> Slot {
        match self {
            Slot::Whole((a, b)) => Slot::Whole(seg(neg(a), neg(b))),
            Slot::Half((a, b), e) => Slot::Half(seg(neg(a), neg(b)), neg(e)),
        }
    }
}

#[derive(Debug)]
struct Piece {
    slots: Vec<Slot>,
}

/// Curve segment inside one mixed triangle, joining two crossed-edge
/// midpoints, with the two pieces it separates.
#[derive(Debug)]
struct Segment {
    ends: [Seg; 2],
    sides: [usize; 2],
}

/// The pieces, segments and gluing data of a patchwork.
#[derive(Debug)]
pub struct PieceComplex {
    degree: u32,
    pieces: Vec<Piece>,
    segments: Vec<Segment>,
    uniform_triangles: usize,
    mixed_triangles: usize,
}

fn on_boundary(d: i32, s: Seg) -> bool {
    let l1 = |p: Pt| p.0.abs() + p.1.abs();
    l1(s.0) == d && l1(s.1) == d
}

impl PieceComplex {
    pub fn build(t: &Triangulation, signs: &SignDistribution) -> Result<Self> {
        if t.degree() != signs.degree() {
            return Err(Error::DegreeMismatch {
                triangulation: t.degree(),
                other: signs.degree(),
            });
        }
        let d = t.degree();
        let base: HashMap<Pt, bool> = t
            .points()
            .iter()
            .zip(signs.iter())
            .map(|(p, s)| ((p.i, p.j), s))
            .collect();
        // sign on the whole diamond: reflecting in x adds i, in y adds j
        let sign = |p: Pt| -> bool {
            let mut s = base[&(p.0.abs(), p.1.abs())];
            if p.0 < 0 && p.0 % 2 != 0 {
                s = !s;
            }
            if p.1 < 0 && p.1 % 2 != 0 {
                s = !s;
            }
            s
        };

        let mut pieces = Vec::new();
        let mut segments = Vec::new();
        let (mut uniform, mut mixed) = (0, 0);
        for tri in t.triangle_points() {
            for (sx, sy) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
                let v: Vec<Pt> = tri.iter().map(|p| (sx * p.i, sy * p.j)).collect();
                let s: Vec<bool> = v.iter().map(|&p| sign(p)).collect();
                if s[0] == s[1] && s[1] == s[2] {
                    uniform += 1;
                    pieces.push(Piece {
                        slots: vec![
                            Slot::Whole(seg(v[0], v[1])),
                            Slot::Whole(seg(v[1], v[2])),
                            Slot::Whole(seg(v[0], v[2])),
                        ],
                    });
                    continue;
                }
                mixed += 1;
                // the corner whose sign differs from both others
                let c = (0..3)
                    .find(|&k| s[k] != s[(k + 1) % 3] && s[k] != s[(k + 2) % 3])
                    .expect("mixed");
                let (a, b) = (v[(c + 1) % 3], v[(c + 2) % 3]);
                let c = v[c];
                let (ca, cb) = (seg(c, a), seg(c, b));
                let corner = pieces.len();
                pieces.push(Piece {
                    slots: vec![Slot::Half(ca, c), Slot::Half(cb, c)],
                });
                pieces.push(Piece {
                    slots: vec![Slot::Half(ca, a), Slot::Half(cb, b), Slot::Whole(seg(a, b))],
                });
                segments.push(Segment {
                    ends: [ca, cb],
                    sides: [corner, corner + 1],
                });
            }
        }
        Ok(PieceComplex {
            degree: d,
            pieces,
            segments,
            uniform_triangles: uniform,
            mixed_triangles: mixed,
        })
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn uniform_triangles(&self) -> usize {
        self.uniform_triangles
    }

    pub fn mixed_triangles(&self) -> usize {
        self.mixed_triangles
    }

    /// Piece adjacency as `(piece, piece, flips orientation)`.
    fn adjacencies(&self) -> Result<Vec<(usize, usize, bool)>> {
        let d = self.degree as i32;
        let mut owners: HashMap<Slot, Vec<usize>> = HashMap::new();
        for (k, p) in self.pieces.iter().enumerate() {
            for &s in &p.slots {
                owners.entry(s).or_default().push(k);
            }
        }
        let mut out = Vec::new();
        for (&slot, who) in &owners {
            let edge = match slot {
                Slot::Whole(e) | Slot::Half(e, _) => e,
            };
            if on_boundary(d, edge) {
                if who.len() != 1 {
                    return Err(Error::InvariantViolation(format!(
                        "boundary slot {slot:?} has {} pieces",
                        who.len()
                    )));
                }
                let other = owners.get(&slot.antipode()).ok_or_else(|| {
                    Error::InvariantViolation(format!("boundary slot {slot:?} has no antipode"))
                })?;
                // each glued pair once
                if slot < slot.antipode() {
                    out.push((who[0], other[0], true));
                }
            } else {
                if who.len() != 2 {
                    return Err(Error::InvariantViolation(format!(
                        "interior slot {slot:?} has {} pieces",
                        who.len()
                    )));
                }
                out.push((who[0], who[1], false));
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// Orientation-tracking flood fill. Returns the region of each piece and,
/// per region, whether the orientation bit contradicted itself.
fn flood_regions(n: usize, adj: &[(usize, usize, bool)]) -> (Vec<usize>, Vec<bool>) {
    let mut nbrs: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for &(a, b, f) in adj {
        nbrs[a].push((b, f));
        nbrs[b].push((a, f));
    }
    let mut region = vec![usize::MAX; n];
    let mut orient = vec![false; n];
    let mut contradicts = Vec::new();
    for s in 0..n {
        if region[s] != usize::MAX {
            continue;
        }
        let r = contradicts.len();
        contradicts.push(false);
        region[s] = r;
        let mut queue = VecDeque::from([s]);
        while let Some(p) = queue.pop_front() {
            for &(q, flip) in &nbrs[p] {
                let want = orient[p] ^ flip;
                if region[q] == usize::MAX {
                    region[q] = r;
                    orient[q] = want;
                    queue.push_back(q);
                } else if orient[q] != want {
                    contradicts[r] = true;
                }
            }
        }
    }
    (region, contradicts)
}

struct Curve {
    segments: Vec<usize>,
    glued_crossings: usize,
}

/// Splits segments into closed curves; midpoints of boundary edges are
/// identified with their antipodes.
fn trace_curves(d: i32, segments: &[Segment]) -> Result<Vec<Curve>> {
    let node = |e: Seg| -> Seg {
        if on_boundary(d, e) {
            let a = seg(neg(e.0), neg(e.1));
            e.min(a)
        } else {
            e
        }
    };
    let mut at: BTreeMap<Seg, Vec<usize>> = BTreeMap::new();
    for (k, s) in segments.iter().enumerate() {
        for &e in &s.ends {
            at.entry(node(e)).or_default().push(k);
        }
    }
    for (e, v) in &at {
        if v.len() != 2 {
            return Err(Error::InvariantViolation(format!(
                "midpoint of {e:?} meets {} segments",
                v.len()
            )));
        }
    }
    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        let mut curve = Curve {
            segments: Vec::new(),
            glued_crossings: 0,
        };
        let mut cur = start;
        // leave through the second end
        let mut exit = node(segments[start].ends[1]);
        loop {
            used[cur] = true;
            curve.segments.push(cur);
            if on_boundary(d, exit) {
                curve.glued_crossings += 1;
            }
            let pair = &at[&exit];
            let next = if pair[0] == cur { pair[1] } else { pair[0] };
            if next == start && used[next] {
                break;
            }
            let ends = segments[next].ends.map(node);
            exit = if ends[0] == exit { ends[1] } else { ends[0] };
            cur = next;
        }
        curves.push(curve);
    }
    Ok(curves)
}

/// Naive classification, independent of the union-find pipeline.
pub fn oracle_classify(
    t: &Triangulation,
    signs: &SignDistribution,
) -> Result<ClassificationResult> {
    let pc = PieceComplex::build(t, signs)?;
    let d = pc.degree as i32;
    let adj = pc.adjacencies()?;
    let (region, contradicts) = flood_regions(pc.pieces.len(), &adj);
    let curves = trace_curves(d, &pc.segments)?;

    let mut pseudolines = Vec::new();
    let mut ovals = Vec::new();
    for c in &curves {
        if c.glued_crossings % 2 == 1 {
            pseudolines.push(c);
        } else {
            ovals.push(c);
        }
    }
    let expected_pseudolines = (d % 2) as usize;
    if pseudolines.len() != expected_pseudolines {
        return Err(Error::InvariantViolation(format!(
            "{} pseudolines at degree {d}",
            pseudolines.len()
        )));
    }

    let region_count = contradicts.len();
    let root = if d % 2 == 0 {
        let bad: Vec<usize> = (0..region_count).filter(|&r| contradicts[r]).collect();
        match bad.as_slice() {
            [r] => *r,
            _ => {
                return Err(Error::InvariantViolation(format!(
                    "{} non-orientable regions at even degree",
                    bad.len()
                )))
            }
        }
    } else {
        if contradicts.iter().any(|&c| c) {
            return Err(Error::InvariantViolation(
                "non-orientable region at odd degree".into(),
            ));
        }
        let line = pseudolines[0];
        let mut sides: Vec<usize> = line
            .segments
            .iter()
            .flat_map(|&s| pc.segments[s].sides.map(|p| region[p]))
            .collect();
        sides.sort_unstable();
        sides.dedup();
        match sides.as_slice() {
            [r] => *r,
            _ => {
                return Err(Error::InvariantViolation(
                    "pseudoline separates regions".into(),
                ))
            }
        }
    };

    // each oval joins the two regions on its sides
    let mut edges = Vec::new();
    for c in &ovals {
        let s = &pc.segments[c.segments[0]];
        let (a, b) = (region[s.sides[0]], region[s.sides[1]]);
        if a == b {
            return Err(Error::InvariantViolation("oval does not separate".into()));
        }
        edges.push((a, b));
    }
    if edges.len() + 1 != region_count {
        return Err(Error::InvariantViolation(format!(
            "{region_count} regions and {} ovals",
            edges.len()
        )));
    }
    let mut nbrs = vec![Vec::new(); region_count];
    for &(a, b) in &edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    let mut tree = SchemeTree::new(d % 2 == 1);
    let mut node = vec![usize::MAX; region_count];
    node[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(r) = queue.pop_front() {
        for &q in &nbrs[r] {
            if node[q] == usize::MAX {
                node[q] = tree.add_oval(node[r]);
                queue.push_back(q);
            }
        }
    }
    if tree.region_count() != region_count {
        return Err(Error::InvariantViolation(
            "region graph is disconnected".into(),
        ));
    }
    if ovals.len() > harnack_bound(t.degree()) {
        return Err(Error::InvariantViolation("Harnack bound exceeded".into()));
    }
    Ok(ClassificationResult {
        scheme: tree.canonical(),
        oval_count: ovals.len(),
        region_count,
        has_pseudoline: d % 2 == 1,
    })
}
