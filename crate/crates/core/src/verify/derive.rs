//! Subdegrees backed by certificates: from a conjugacy class or from a central
//! diagonal witness, with the exact stabilizer when `m = 2`.

use num_bigint::BigUint;

use super::{run_check, CheckResult, Outcome};
use crate::error::{Error, Result};
use crate::group::{algo, Elem};
use crate::projline::Psl;
use crate::wreath::alpha::{
    build_g, build_h, stabilizer_by_double_cosets, stabilizer_full, AlphaFn, Stabilizer,
};
use crate::wreath::certificate::{
    class_certificate, divisor_value, CertKind, CertWitness, SubdegreeCertificate,
};
use crate::wreath::witness::search_central_t;
use crate::wreath::{BaseSubgroup, Wr2, MAX_SCAN_ORDER};

/// A constructed subdegree.
#[derive(Debug, Clone)]
pub struct Derived {
    pub cert: SubdegreeCertificate,
    /// Exact `H_f`, computed for `m = 2`.
    pub stabilizer: Option<Stabilizer>,
    pub alpha: Option<AlphaFn>,
}

impl Derived {
    pub fn value(&self) -> Result<BigUint> {
        self.cert.value()
    }
}

/// Whether an `m = 2` full scan of `H` is run as a cross-check: always up to
/// `q = 11`, and for larger enumerable `H` only on long runs.
pub fn full_scan_enabled(t: &Psl, long: bool) -> bool {
    let h = 2 * (t.group.order() as u64).pow(2);
    h <= MAX_SCAN_ORDER && (t.q() <= 11 || long)
}

fn cross_check(t: &Psl, alpha: &AlphaFn, stab: &Stabilizer) -> Result<()> {
    let full = stabilizer_full(&t.group, alpha, false)?;
    if full.order != stab.order {
        return Err(Error::Invariant(format!(
            "full scan gives |H_f| = {}, double cosets give {}",
            full.order, stab.order
        )));
    }
    Ok(())
}

/// `|γ^T|^m`; for `m = 2` the exact index of the stabilizer of the function
/// built from `γ`.
pub fn class_subdegree(t: &Psl, gamma: Elem, m: usize, full_scan: bool) -> Result<Derived> {
    if m != 2 {
        return Ok(Derived {
            cert: class_certificate(t, gamma, m)?,
            stabilizer: None,
            alpha: None,
        });
    }
    let g = &t.group;
    let (alpha, c) = build_h(g, gamma)?;
    let stab = stabilizer_by_double_cosets(g, &alpha, &c, true)?;
    if full_scan {
        cross_check(t, &alpha, &stab)?;
    }
    Ok(Derived {
        cert: SubdegreeCertificate {
            q: t.q(),
            m,
            kind: CertKind::ExactStabilizer,
            value: stab.index().to_string(),
            witness: CertWitness::Class { gamma },
            stabilizer: Some(stab.describe(g)),
        },
        stabilizer: Some(stab),
        alpha: Some(alpha),
    })
}

/// A subdegree from `t` with a central diagonal element of `D^t ∩ L`, for
/// `D = K^m` or `K wr S_m`.
///
/// For `m = 2` the value is the exact index of `H_f`; otherwise `|T:K|^m`
/// when `D = K wr S_m` with `K` maximal, and `|H:D|` (a multiple of the
/// subdegree) otherwise.
pub fn witness_subdegree(t: &Psl, d: &BaseSubgroup, m: usize, full_scan: bool) -> Result<Derived> {
    let g = &t.group;
    let w = search_central_t(g, d, m).ok_or_else(|| {
        Error::Invariant(format!(
            "no central diagonal witness for a base subgroup of order {} at m = {m}",
            d.k.order()
        ))
    })?;
    if m == 2 {
        let tw = Wr2::new(w.t[0], w.t[1], false);
        let alpha = build_g(g, d, tw, w.eta, w.sigma[0] == 1)?;
        let stab = stabilizer_by_double_cosets(g, &alpha, &d.k, true)?;
        if full_scan {
            cross_check(t, &alpha, &stab)?;
        }
        let mut cert = SubdegreeCertificate::constructed(
            t.q(),
            m,
            CertKind::ExactStabilizer,
            BigUint::from(stab.index()),
            d,
            &w,
        );
        cert.stabilizer = Some(stab.describe(g));
        return Ok(Derived {
            cert,
            stabilizer: Some(stab),
            alpha: Some(alpha),
        });
    }
    let (kind, value) = if d.swap && algo::is_maximal(g, &d.k) {
        (
            CertKind::CentralWitness,
            BigUint::from(g.order() / d.k.order()).pow(m as u32),
        )
    } else {
        (CertKind::DivisorBound, divisor_value(g, d, m))
    };
    Ok(Derived {
        cert: SubdegreeCertificate::constructed(t.q(), m, kind, value, d, &w),
        stabilizer: None,
        alpha: None,
    })
}

/// Replays every certificate; each yields one check keyed by position.
pub fn replay_certificates(
    certs: &[SubdegreeCertificate],
    psl: impl Fn(u32) -> Result<std::sync::Arc<Psl>> + Sync,
) -> Vec<CheckResult> {
    use rayon::prelude::*;
    let mut out: Vec<CheckResult> = certs
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let kind = serde_json::to_value(c.kind)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            let id = format!("replay.{i:04}.q{}.m{}.{kind}", c.q, c.m);
            run_check(id, || {
                let t = psl(c.q)?;
                let ok = c.replay(&t)?;
                let actual = if ok {
                    c.value.clone()
                } else {
                    "mismatch".into()
                };
                Ok(Outcome::new(&c.value, actual))
            })
        })
        .collect();
    super::sort_results(&mut out);
    out
}
