//! Replayable subdegree certificates.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::alpha::{build_g, build_h, stabilizer_by_double_cosets};
use super::witness::{verify_central, CentralWitness};
use super::{symmetric_group, BaseSubgroup, Wr2};
use crate::error::{Error, Result};
use crate::group::{algo, Elem, GroupTable, Subgroup};
use crate::projline::Psl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    /// `|H : H_f|` for an explicit `f`, with `H_f` computed exactly.
    ExactStabilizer,
    /// `|T:K|^m` from a central diagonal element of `D^t ∩ L`, `D = K wr S_m`,
    /// `K` maximal.
    CentralWitness,
    /// `|γ^T|^m`.
    ClassSize,
    /// A nontrivial subdegree divides `|H : D|`.
    DivisorBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CertWitness {
    /// `D = K^m` or `K wr S_m` with `K = <k_gens>`, plus `t` and `(η,...,η)σ`.
    Constructed {
        k_gens: Vec<Elem>,
        swap: bool,
        t: Vec<Elem>,
        eta: Elem,
        sigma: Vec<u8>,
    },
    Class {
        gamma: Elem,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdegreeCertificate {
    pub q: u32,
    pub m: usize,
    pub kind: CertKind,
    /// Decimal string; values can exceed 64 bits.
    pub value: String,
    pub witness: CertWitness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<String>,
}

impl SubdegreeCertificate {
    pub fn constructed(
        q: u32,
        m: usize,
        kind: CertKind,
        value: BigUint,
        d: &BaseSubgroup,
        w: &CentralWitness,
    ) -> SubdegreeCertificate {
        SubdegreeCertificate {
            q,
            m,
            kind,
            value: value.to_string(),
            witness: CertWitness::Constructed {
                k_gens: d.k.generators().to_vec(),
                swap: d.swap,
                t: w.t.clone(),
                eta: w.eta,
                sigma: w.sigma.clone(),
            },
            stabilizer: None,
        }
    }

    pub fn value(&self) -> Result<BigUint> {
        self.value
            .parse()
            .map_err(|_| Error::Parse(format!("bad subdegree {:?}", self.value)))
    }

    /// Recomputes the certificate from scratch and checks the stored value.
    pub fn replay(&self, t: &Psl) -> Result<bool> {
        if t.q() != self.q {
            return Err(Error::Invariant(format!(
                "certificate for q={} replayed at q={}",
                self.q,
                t.q()
            )));
        }
        let g = &t.group;
        let expected = self.value()?;
        let actual = match (&self.kind, &self.witness) {
            (CertKind::ClassSize, CertWitness::Class { gamma }) => {
                class_size_value(g, *gamma, self.m)?
            }
            (CertKind::ExactStabilizer, CertWitness::Class { gamma }) => {
                self.need_m2()?;
                let (alpha, c) = build_h(g, *gamma)?;
                BigUint::from(stabilizer_by_double_cosets(g, &alpha, &c, false)?.index())
            }
            (
                kind,
                CertWitness::Constructed {
                    k_gens,
                    swap,
                    t: tt,
                    eta,
                    sigma,
                },
            ) => {
                let d = BaseSubgroup {
                    k: Subgroup::generate(g, k_gens),
                    swap: *swap,
                };
                let w = CentralWitness {
                    t: tt.clone(),
                    eta: *eta,
                    sigma: sigma.clone(),
                    shape: super::witness::TShape::General,
                    intersection_order: 0,
                };
                if tt.len() != self.m || !verify_central(g, &d, &w) {
                    return Ok(false);
                }
                match kind {
                    CertKind::CentralWitness => {
                        if !d.swap || !algo::is_maximal(g, &d.k) {
                            return Ok(false);
                        }
                        BigUint::from(g.order() / d.k.order()).pow(self.m as u32)
                    }
                    CertKind::DivisorBound => divisor_value(g, &d, self.m),
                    CertKind::ExactStabilizer => {
                        self.need_m2()?;
                        let tw = Wr2::new(tt[0], tt[1], false);
                        let alpha = build_g(g, &d, tw, *eta, sigma[0] == 1)?;
                        BigUint::from(stabilizer_by_double_cosets(g, &alpha, &d.k, false)?.index())
                    }
                    CertKind::ClassSize => return Ok(false),
                }
            }
            _ => return Ok(false),
        };
        Ok(actual == expected)
    }

    fn need_m2(&self) -> Result<()> {
        if self.m == 2 {
            Ok(())
        } else {
            Err(Error::WrongDegree {
                expected: 2,
                got: self.m,
            })
        }
    }
}

/// `|γ^T|^m`.
pub fn class_size_value(g: &GroupTable, gamma: Elem, m: usize) -> Result<BigUint> {
    if gamma == 0 {
        return Err(Error::TrivialElement);
    }
    let class = algo::conjugacy_class(g, gamma).len();
    Ok(BigUint::from(class).pow(m as u32))
}

/// `|H : D|` for `D = K^m` or `K wr S_m`.
pub fn divisor_value(g: &GroupTable, d: &BaseSubgroup, m: usize) -> BigUint {
    let h = BigUint::from(g.order()).pow(m as u32) * BigUint::from(symmetric_group(m).len());
    h / d.order(m)
}

/// Class-size certificate for `m ≥ 3` (or any `m`).
pub fn class_certificate(t: &Psl, gamma: Elem, m: usize) -> Result<SubdegreeCertificate> {
    Ok(SubdegreeCertificate {
        q: t.q(),
        m,
        kind: CertKind::ClassSize,
        value: class_size_value(&t.group, gamma, m)?.to_string(),
        witness: CertWitness::Class { gamma },
        stabilizer: None,
    })
}
