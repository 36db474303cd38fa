//! SVG drawings of a patchwork: triangulation edges, signed lattice points
//! and the curve through the midpoints of crossed edges.

use std::collections::HashMap;
use std::fmt::Write;

use crate::diamond::{extend_signs, reflect};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::sign::SignDistribution;
use crate::triangulation::Triangulation;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    /// draw `A(d)` only instead of the diamond
    pub quadrant_only: bool,
    pub show_signs: bool,
    pub show_curve: bool,
    /// pixels per lattice unit; even so that midpoints land on integers
    pub scale: u32,
    pub edge_width: f64,
    pub curve_width: f64,
    pub point_radius: f64,
    pub plus_color: String,
    pub minus_color: String,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            quadrant_only: false,
            show_signs: true,
            show_curve: true,
            scale: 40,
            edge_width: 1.0,
            curve_width: 3.0,
            point_radius: 4.0,
            plus_color: "#d62728".into(),
            minus_color: "#1f77b4".into(),
        }
    }
}

struct Scene {
    points: Vec<LatticePoint>,
    edges: Vec<[u32; 2]>,
    triangles: Vec<[u32; 3]>,
    minus: Vec<bool>,
}

/// Chains of curve segments as sequences of crossed-edge ids. Each chain
/// is maximal in the drawing plane; closed chains repeat their first id.
fn curve_chains(scene: &Scene) -> Vec<Vec<usize>> {
    let edge_id: HashMap<[u32; 2], usize> = scene
        .edges
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, k))
        .collect();
    let lookup = |a: u32, b: u32| edge_id[&[a.min(b), a.max(b)]];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); scene.edges.len()];
    for &[a, b, c] in &scene.triangles {
        let crossed: Vec<usize> = [(a, b), (b, c), (a, c)]
            .into_iter()
            .filter(|&(u, v)| scene.minus[u as usize] != scene.minus[v as usize])
            .map(|(u, v)| lookup(u, v))
            .collect();
        if let [p, q] = crossed[..] {
            adj[p].push(q);
            adj[q].push(p);
        }
    }
    let mut used = vec![false; scene.edges.len()];
    let mut chains = Vec::new();
    let walk = |start: usize, used: &mut Vec<bool>| {
        let mut chain = vec![start];
        used[start] = true;
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            let next = adj[cur]
                .iter()
                .copied()
                .find(|&n| n != prev && (!used[n] || n == start));
            match next {
                Some(n) if n == start && chain.len() > 2 => {
                    chain.push(n);
                    break;
                }
                Some(n) if !used[n] => {
                    used[n] = true;
                    chain.push(n);
                    (prev, cur) = (cur, n);
                }
                _ => break,
            }
        }
        chain
    };
    // open chains start at midpoints with one segment
    for k in 0..adj.len() {
        if adj[k].len() == 1 && !used[k] {
            chains.push(walk(k, &mut used));
        }
    }
    for k in 0..adj.len() {
        if !adj[k].is_empty() && !used[k] {
            chains.push(walk(k, &mut used));
        }
    }
    chains
}

/// Deterministic SVG of `(T, σ)`: one `<line>` per edge, one `<circle>` per
/// lattice point and one `<polyline>` per curve chain.
pub fn render_svg(
    t: &Triangulation,
    signs: &SignDistribution,
    opts: &RenderOptions,
) -> Result<String> {
    let d = t.degree();
    if signs.degree() != d {
        return Err(Error::DegreeMismatch {
            triangulation: d,
            other: signs.degree(),
        });
    }
    let scene = if opts.quadrant_only {
        Scene {
            points: t.points(),
            edges: t.edges().to_vec(),
            triangles: t.triangles().to_vec(),
            minus: signs.iter().collect(),
        }
    } else {
        let diamond = reflect(t);
        Scene {
            minus: extend_signs(&diamond, signs)?,
            points: diamond.vertices().to_vec(),
            edges: diamond.edges().to_vec(),
            triangles: diamond.triangles().to_vec(),
        }
    };

    let s = (opts.scale.max(2) & !1) as i64;
    let (lo, hi) = if opts.quadrant_only {
        (0, d as i64)
    } else {
        (-(d as i64), d as i64)
    };
    let margin = s;
    let size = (hi - lo) * s + 2 * margin;
    let px = |p: LatticePoint| {
        (
            (p.i as i64 - lo) * s + margin,
            (hi - p.j as i64) * s + margin,
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        out,
        r##"<g stroke="#808080" stroke-width="{}">"##,
        opts.edge_width
    );
    for &[a, b] in &scene.edges {
        let (x1, y1) = px(scene.points[a as usize]);
        let (x2, y2) = px(scene.points[b as usize]);
        let _ = writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    out.push_str("</g>\n");

    if opts.show_curve {
        let _ = writeln!(
            out,
            r##"<g fill="none" stroke="#000000" stroke-width="{}" stroke-linejoin="round">"##,
            opts.curve_width
        );
        for chain in curve_chains(&scene) {
            let coords: Vec<String> = chain
                .iter()
                .map(|&e| {
                    let [a, b] = scene.edges[e];
                    let (x1, y1) = px(scene.points[a as usize]);
                    let (x2, y2) = px(scene.points[b as usize]);
                    // s is even, so midpoints stay integral
                    format!("{},{}", (x1 + x2) / 2, (y1 + y2) / 2)
                })
                .collect();
            let _ = writeln!(out, r#"<polyline points="{}"/>"#, coords.join(" "));
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g stroke=\"#000000\" stroke-width=\"0.5\">\n");
    for (k, &p) in scene.points.iter().enumerate() {
        let (x, y) = px(p);
        let fill = match (opts.show_signs, scene.minus[k]) {
            (false, _) => "#ffffff",
            (true, false) => opts.plus_color.as_str(),
            (true, true) => opts.minus_color.as_str(),
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{x}" cy="{y}" r="{}" fill="{fill}"/>"#,
            opts.point_radius
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
