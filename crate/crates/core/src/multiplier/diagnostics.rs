//! Besov-type sufficient and necessary conditions for Hankel multipliers,
//! evaluated as plain norm expressions. Their constants are not known, so
//! none of them enters a certified bracket.

use crate::besov::{besov_norm, BesovParams};
use crate::error::{input, Result};
use crate::linalg::PExponent;
use crate::symbols::{SmoothCutoffSpec, Spectrum};

/// Norms of `ψ` in the Besov classes attached to `𝔐_p` for Hankel matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelScores {
    /// `B^{1/p#}_{p,∞}`: the necessary condition (lower end of the global estimate).
    pub global_lower: f64,
    /// `B^{1/p#}_{p,p}`: the sufficient condition (upper end of the global estimate).
    pub global_upper: f64,
    /// `B^{1/p#}_{p#,p#}`, the Hankel `S_{p#}` class; `None` at `p = 1`.
    pub schatten_sharp: Option<f64>,
    /// `B^{1/p#}_{p,p♭}`.
    pub r_family_at_p: f64,
    /// `B^{1/p#}_{p♭,p♭}`; `None` for `p > 2/3`.
    pub r_family_at_flat: Option<f64>,
    /// `B^{1/p#}_{2,p#}`, or `B^0_{2,∞}` at `p = 1`.
    pub bozejko: f64,
}

fn norm<S: Spectrum + ?Sized>(psi: &S, s: f64, p: f64, q: f64) -> Result<f64> {
    Ok(besov_norm(psi, BesovParams::new(s, p, q)?, &SmoothCutoffSpec::VPartition)?.norm)
}

/// `B^{1/p#}_{r, r♭}` for `p ≤ r ≤ min(1, p♭)`.
pub fn r_family_score<S: Spectrum + ?Sized>(psi: &S, p: PExponent, r: f64) -> Result<f64> {
    let upper = p.flat().min(1.0);
    if !(r >= p.p() - 1e-12 && r <= upper + 1e-12) {
        return input(format!("r must lie in [{}, {upper}], got {r}", p.p()));
    }
    norm(psi, p.inv_sharp(), r, 2.0 * r / (2.0 - r))
}

pub fn hankel_scores<S: Spectrum + ?Sized>(psi: &S, p: PExponent) -> Result<HankelScores> {
    let s = p.inv_sharp();
    let sharp = p.sharp().value();
    Ok(HankelScores {
        global_lower: norm(psi, s, p.p(), f64::INFINITY)?,
        global_upper: norm(psi, s, p.p(), p.p())?,
        schatten_sharp: if p.is_one() { None } else { Some(norm(psi, s, sharp, sharp)?) },
        r_family_at_p: r_family_score(psi, p, p.p())?,
        r_family_at_flat: if p.p() <= 2.0 / 3.0 { Some(r_family_score(psi, p, p.flat())?) } else { None },
        bozejko: norm(psi, s, 2.0, sharp)?,
    })
}
