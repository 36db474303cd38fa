//! The order-6 group permuting the barycentric coordinates `(i, j, d-i-j)`.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::lattice::LatticePoint;

/// One of the six permutations of the barycentric coordinates.
///
/// Stored as an index permutation: the image of `(c0, c1, c2)` is
/// `(c[perm[0]], c[perm[1]], c[perm[2]])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetryElement {
    perm: [u8; 3],
}

impl SymmetryElement {
    pub const IDENTITY: SymmetryElement = SymmetryElement { perm: [0, 1, 2] };
    /// `τ(i, j) = (j, i)`.
    pub const TRANSPOSE: SymmetryElement = SymmetryElement { perm: [1, 0, 2] };
    /// `ρ(i, j) = (d - i - j, i)`.
    pub const ROTATION: SymmetryElement = SymmetryElement { perm: [2, 0, 1] };

    /// All six elements: `id, ρ, ρ², τ, τρ, τρ²`.
    pub fn all() -> [SymmetryElement; 6] {
        let r = Self::ROTATION;
        let t = Self::TRANSPOSE;
        let r2 = r.compose(r);
        [Self::IDENTITY, r, r2, t, t.compose(r), t.compose(r2)]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: SymmetryElement) -> SymmetryElement {
        let mut perm = [0u8; 3];
        for (k, slot) in perm.iter_mut().enumerate() {
            *slot = other.perm[self.perm[k] as usize];
        }
        SymmetryElement { perm }
    }

    pub fn inverse(self) -> SymmetryElement {
        let mut perm = [0u8; 3];
        for (k, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = k as u8;
        }
        SymmetryElement { perm }
    }

    /// A reflection is an element of order 2 (a transposition of coordinates).
    pub fn is_reflection(self) -> bool {
        self != Self::IDENTITY && self.compose(self) == Self::IDENTITY
    }

    pub fn apply(self, degree: u32, p: LatticePoint) -> LatticePoint {
        let c = [p.i, p.j, degree as i32 - p.i - p.j];
        LatticePoint::new(c[self.perm[0] as usize], c[self.perm[1] as usize])
    }

    pub fn name(self) -> &'static str {
        let all = Self::all();
        const NAMES: [&str; 6] = ["id", "rho", "rho2", "tau", "tau-rho", "tau-rho2"];
        let k = all.iter().position(|&g| g == self).expect("closed group");
        NAMES[k]
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SymmetryElement::all()
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::parse_at(1, 1, format!("unknown symmetry element `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_relations() {
        let r = SymmetryElement::ROTATION;
        let t = SymmetryElement::TRANSPOSE;
        assert_eq!(r.compose(r).compose(r), SymmetryElement::IDENTITY);
        assert_eq!(t.compose(t), SymmetryElement::IDENTITY);
        let all = SymmetryElement::all();
        for a in all {
            for b in all {
                assert!(all.contains(&a.compose(b)));
            }
            assert_eq!(a.compose(a.inverse()), SymmetryElement::IDENTITY);
        }
        let mut sorted = all.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
        assert_eq!(all.iter().filter(|g| g.is_reflection()).count(), 3);
    }

    #[test]
    fn generators_act_as_documented() {
        let p = LatticePoint::new(1, 2);
        assert_eq!(
            SymmetryElement::TRANSPOSE.apply(5, p),
            LatticePoint::new(2, 1)
        );
        assert_eq!(
            SymmetryElement::ROTATION.apply(5, p),
            LatticePoint::new(2, 1)
        );
        assert_eq!(
            SymmetryElement::ROTATION.apply(5, LatticePoint::new(0, 0)),
            LatticePoint::new(5, 0)
        );
    }

    #[test]
    fn action_is_compatible_with_composition() {
        for g in SymmetryElement::all() {
            for h in SymmetryElement::all() {
                for i in 0..=4 {
                    for j in 0..=(4 - i) {
                        let p = LatticePoint::new(i, j);
                        assert_eq!(g.apply(4, h.apply(4, p)), g.compose(h).apply(4, p));
                    }
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for g in SymmetryElement::all() {
            assert_eq!(g.name().parse::<SymmetryElement>().unwrap(), g);
        }
        assert!("nope".parse::<SymmetryElement>().is_err());
    }
}
