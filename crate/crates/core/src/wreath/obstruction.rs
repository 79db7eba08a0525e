//! Finite facts showing that no `f` has stabilizer `P_1 wr S_2` when `q` is
//! even or `q ≡ 3 (mod 4)`.

use serde::Serialize;

use crate::atlas::{coset_involution_check, intersect_conjugate};
use crate::error::{Error, Result};
use crate::group::{algo, IsoFingerprint, Subgroup};
use crate::projline::Psl;

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub q: u32,
    /// No nonidentity element of `T` is centralized by all of `P_1`.
    pub p1_centralizer_trivial: bool,
    /// Every coset `P_1 s`, `s ∉ P_1`, contains an involution.
    pub coset_involutions: bool,
    /// `Z(<P_1 ∩ P_1^t, t>) = 1` for every involution `t ∉ P_1`.
    pub dihedral_centers_trivial: bool,
    pub involutions_checked: usize,
    /// Type of `<P_1 ∩ P_1^t, t>` for the first involution `t ∉ P_1`.
    pub first_dihedral: Option<IsoFingerprint>,
}

impl ObstructionReport {
    pub fn passed(&self) -> bool {
        self.p1_centralizer_trivial && self.coset_involutions && self.dihedral_centers_trivial
    }
}

pub fn obstruction_checks(t: &Psl) -> Result<ObstructionReport> {
    let q = t.q();
    if q % 4 == 1 {
        return Err(Error::WrongCongruence(q));
    }
    let g = &t.group;
    let p1 = &t.p1;
    let p1_centralizer_trivial = algo::centralizer_of(g, p1).order() == 1;
    let coset_involutions = coset_involution_check(g, p1);
    let mut checked = 0;
    let mut first = None;
    let mut all_trivial = true;
    for s in g
        .elements()
        .filter(|&s| g.is_involution(s) && !p1.contains(s))
    {
        let mut gens = intersect_conjugate(g, p1, s);
        gens.push(s);
        let x = Subgroup::generate(g, &gens);
        if first.is_none() {
            first = Some(x.fingerprint(g));
        }
        all_trivial &= algo::center(g, &x).order() == 1;
        checked += 1;
    }
    Ok(ObstructionReport {
        q,
        p1_centralizer_trivial,
        coset_involutions,
        dihedral_centers_trivial: all_trivial,
        involutions_checked: checked,
        first_dihedral: first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q13_rejected() {
        let t = Psl::new(13).unwrap();
        assert_eq!(
            obstruction_checks(&t).unwrap_err(),
            Error::WrongCongruence(13)
        );
    }
}
