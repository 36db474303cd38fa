//! Named triangulations shipped with the crate.

use crate::error::{Error, Result};
use crate::io::read_triangulation;
use crate::lifting::{from_lifting, Lifting};
use crate::triangulation::Triangulation;

const BOWTIE8: &str = include_str!("../data/bowtie8.json");
const FIG2_MIDDLE8: &str = include_str!("../data/fig2-middle8.json");
const FIG2_RIGHT8: &str = include_str!("../data/fig2-right8.json");

/// Fixed names, plus `delaunay-<d>` for any degree.
pub const NAMES: [&str; 3] = ["bowtie8", "fig2-middle8", "fig2-right8"];

/// `delaunay-<d>` is the lower hull of `i² + ij + j²`; the three degree-8
/// triangulations are stored edge lists.
pub fn builtin(name: &str) -> Result<Triangulation> {
    let data = match name {
        "bowtie8" => BOWTIE8,
        "fig2-middle8" => FIG2_MIDDLE8,
        "fig2-right8" => FIG2_RIGHT8,
        _ => {
            let d = name
                .strip_prefix("delaunay-")
                .filter(|s| !s.starts_with('+') && !s.starts_with('0'))
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
            return Ok(from_lifting(&Lifting::quadratic(d)?));
        }
    };
    read_triangulation(data, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::is_regular;

    #[test]
    fn figure_triangulations() {
        for name in NAMES {
            let t = builtin(name).unwrap();
            assert_eq!(t.degree(), 8);
            assert_eq!(t.edges().len(), 108);
            assert_eq!(t.triangles().len(), 64);
        }
        assert!(is_regular(&builtin("bowtie8").unwrap()));
        assert!(is_regular(&builtin("fig2-middle8").unwrap()));
        // no height function induces this one
        assert!(!is_regular(&builtin("fig2-right8").unwrap()));
    }

    #[test]
    fn delaunay() {
        let t = builtin("delaunay-2").unwrap();
        assert_eq!(t.triangles().len(), 4);
        assert!(matches!(
            builtin("delaunay-0"),
            Err(Error::UnknownBuiltin(_))
        ));
        assert!(matches!(
            builtin("delaunay-x"),
            Err(Error::UnknownBuiltin(_))
        ));
        assert!(matches!(builtin("nope"), Err(Error::UnknownBuiltin(_))));
    }
}
