//! Closed-form band-width and border estimates.
//!
//! Order-unity constants are taken as printed in the analytical estimates;
//! the estimates mix approximations that only make dimensional sense for
//! `a = 1` (e.g. the `J ≥ √(L/8)` compatibility bound), which is the default
//! everywhere in this crate.

use crate::model::{CouplingKind, FieldProfile, ModelParams};
use crate::{Error, Result};

/// Number of central-band states, `L! / ((L/2)!)²`.
pub fn n_central(l: usize) -> Result<u64> {
    if l % 2 == 1 {
        return Err(Error::OddChainLength(l));
    }
    let k = (l / 2) as u64;
    Ok((0..k).fold(1u64, |acc, i| acc * (l as u64 - i) / (i + 1)))
}

/// Central-band width without interaction, `L²(L-1)a² / 8Ω`.
pub fn width_unperturbed(l: usize, a: f64, omega: f64) -> f64 {
    let l = l as f64;
    l * l * (l - 1.0) * a * a / (8.0 * omega)
}

/// Central-band width once the Ising term dominates, `(L-2) J a`.
pub fn width_interacting(l: usize, a: f64, j: f64) -> f64 {
    (l as f64 - 2.0) * j * a
}

/// Crossover between the two width laws, `J_0 = L² a / 8Ω`.
pub fn crossover_j0(l: usize, a: f64, omega: f64) -> f64 {
    let l = l as f64;
    l * l * a / (8.0 * omega)
}

/// The coupling at which the two width laws are exactly equal,
/// `L²(L-1) a / (8Ω(L-2))`; [`crossover_j0`] is its large-`L` form.
pub fn crossover_j0_unsimplified(l: usize, a: f64, omega: f64) -> f64 {
    let lf = l as f64;
    crossover_j0(l, a, omega) * (lf - 1.0) / (lf - 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapEstimate {
    /// `J_b = Ω / (a L)`.
    pub jb: f64,
    /// `√(L/8)`: the estimate presumes `J` above this.
    pub compatibility_bound: f64,
    /// `2 (Ω/a)^{2/3}`: chains at least this long overlap for any `J`.
    pub any_j_min_length: f64,
    pub overlaps_for_any_j: bool,
}

pub fn overlap_jb(l: usize, a: f64, omega: f64) -> OverlapEstimate {
    let lf = l as f64;
    let min_len = 2.0 * (omega / a).powf(2.0 / 3.0);
    OverlapEstimate {
        jb: omega / (a * lf),
        compatibility_bound: (lf / 8.0).sqrt(),
        any_j_min_length: min_len,
        overlaps_for_any_j: lf >= min_len,
    }
}

/// Delocalization estimate from the coupled-state census.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelocBorder {
    /// Energy span of directly coupled states `(ΔE)_f`.
    pub delta_e_f: f64,
    /// Mean number of directly coupled states `M_f`.
    pub m_f: f64,
    /// Mean spacing of directly coupled states, `d_f ≈ 2a²/Ω`.
    pub d_f: f64,
    /// `J_cr ≈ 2 d_f = 4a²/Ω`.
    pub j_cr: f64,
}

/// `(ΔE)_f` and `M_f` per coupling kind:
///
/// * N: `(a²/Ω)(L - 3/2)`, `L/2`;
/// * A: `a² L² / 2Ω`, `L²/4`;
/// * NN: `2 (L-2) a²/Ω` (the distance-2 flip of qubits `L-3`, `L-1`) and
///   `M_f ≈ L`.
///
/// `d_f = 2a²/Ω` and `J_cr = 4a²/Ω` for all three.
pub fn deloc_border(kind: CouplingKind, l: usize, a: f64, omega: f64) -> Result<DelocBorder> {
    let lf = l as f64;
    let unit = a * a / omega;
    let (delta_e_f, m_f) = match kind {
        CouplingKind::N => (unit * (lf - 1.5), lf / 2.0),
        CouplingKind::A => (unit * lf * lf / 2.0, lf * lf / 4.0),
        CouplingKind::NN => (unit * 2.0 * (lf - 2.0), lf),
        CouplingKind::Custom => return Err(Error::UnsupportedCoupling(kind.to_string())),
    };
    Ok(DelocBorder {
        delta_e_f,
        m_f,
        d_f: 2.0 * unit,
        j_cr: 4.0 * unit,
    })
}

/// Chaos border for overlapped bands, `J_c = (16/L) √(a²L² + Ω²)`.
pub fn chaos_border(l: usize, a: f64, omega: f64) -> f64 {
    let lf = l as f64;
    16.0 / lf * (a * a * lf * lf + omega * omega).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousBorder {
    /// `Δ² / 8Ω`.
    pub delta_e_f: f64,
    /// `L/2`.
    pub m_f: f64,
    /// `J_cr = Δ² / (4ΩL)`; zero for `Δ = 0`.
    pub j_cr: f64,
}

pub fn deloc_border_homogeneous(l: usize, omega: f64, spread: f64) -> HomogeneousBorder {
    let lf = l as f64;
    HomogeneousBorder {
        delta_e_f: spread * spread / (8.0 * omega),
        m_f: lf / 2.0,
        j_cr: spread * spread / (4.0 * omega * lf),
    }
}

/// Scaling of the delocalization border with a quadratic field gradient.
/// Only proportionalities are known: `(ΔE)_f ∝ b² L³ / Ω` and
/// `J_cr ∝ L^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticScaling {
    pub delta_e_f_scale: f64,
    pub exponent: u32,
}

/// `None` for `b = 0`, where the profile is homogeneous and no exponent applies.
pub fn quadratic_gradient_scaling(kind: CouplingKind, l: usize, b: f64, omega: f64) -> Result<Option<QuadraticScaling>> {
    let exponent = match kind {
        CouplingKind::N => 2,
        CouplingKind::A => 1,
        other => return Err(Error::UnsupportedCoupling(other.to_string())),
    };
    if b == 0.0 {
        return Ok(None);
    }
    let lf = l as f64;
    Ok(Some(QuadraticScaling {
        delta_e_f_scale: b * b * lf.powi(3) / omega,
        exponent,
    }))
}

/// Every estimate that applies to one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct BorderEstimates {
    pub n_cb: Option<u64>,
    pub width_j0: f64,
    pub width_jdom: f64,
    pub j0_crossover: f64,
    pub jb_overlap: OverlapEstimate,
    pub delta_e_f: Option<f64>,
    pub m_f: Option<f64>,
    pub d_f: Option<f64>,
    pub j_cr_deloc: Option<f64>,
    pub j_chaos: f64,
    pub j_cr_homogeneous: Option<f64>,
    pub quadratic: Option<QuadraticScaling>,
}

impl BorderEstimates {
    /// `(name, value)` pairs; absent estimates are omitted.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        let mut out = Vec::new();
        if let Some(n) = self.n_cb {
            out.push(("n_cb", n as f64));
        }
        out.push(("width_j0", self.width_j0));
        out.push(("width_jdom", self.width_jdom));
        out.push(("j0_crossover", self.j0_crossover));
        out.push(("jb_overlap", self.jb_overlap.jb));
        out.push(("jb_compat_bound", self.jb_overlap.compatibility_bound));
        out.push(("any_j_overlap_min_l", self.jb_overlap.any_j_min_length));
        for (name, v) in [
            ("delta_e_f", self.delta_e_f),
            ("m_f", self.m_f),
            ("d_f", self.d_f),
            ("j_cr_deloc", self.j_cr_deloc),
        ] {
            if let Some(v) = v {
                out.push((name, v));
            }
        }
        out.push(("j_chaos", self.j_chaos));
        if let Some(v) = self.j_cr_homogeneous {
            out.push(("j_cr_homogeneous", v));
        }
        if let Some(q) = self.quadratic {
            out.push(("quadratic_delta_e_f_scale", q.delta_e_f_scale));
            out.push(("quadratic_j_cr_exponent", q.exponent as f64));
        }
        out
    }
}

pub fn estimate(params: &ModelParams) -> BorderEstimates {
    let l = params.qubits();
    let omega = params.omega();
    let a = params.profile().gradient();
    let kind = params.coupling().kind;
    let j = params.coupling().j;
    let deloc = deloc_border(kind, l, a, omega).ok();
    let (j_cr_homogeneous, quadratic) = match *params.profile() {
        FieldProfile::Homogeneous { spread, .. } => (Some(deloc_border_homogeneous(l, omega, spread).j_cr), None),
        FieldProfile::QuadraticGradient { b } => (None, quadratic_gradient_scaling(kind, l, b, omega).ok().flatten()),
        FieldProfile::ConstantGradient { .. } => (None, None),
    };
    BorderEstimates {
        n_cb: n_central(l).ok(),
        width_j0: width_unperturbed(l, a, omega),
        width_jdom: width_interacting(l, a, j),
        j0_crossover: crossover_j0(l, a, omega),
        jb_overlap: overlap_jb(l, a, omega),
        delta_e_f: deloc.map(|d| d.delta_e_f),
        m_f: deloc.map(|d| d.m_f),
        d_f: deloc.map(|d| d.d_f),
        j_cr_deloc: deloc.map(|d| d.j_cr),
        j_chaos: chaos_border(l, a, omega),
        j_cr_homogeneous,
        quadratic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingSpec, RawParams};
    use proptest::prelude::*;

    #[test]
    fn central_binomials() {
        assert_eq!(n_central(2).unwrap(), 2);
        assert_eq!(n_central(10).unwrap(), 252);
        assert_eq!(n_central(12).unwrap(), 924);
        assert!(matches!(n_central(7), Err(Error::OddChainLength(7))));
    }

    #[test]
    fn width_laws() {
        assert!((width_unperturbed(10, 1.0, 100.0) - 1.125).abs() < 1e-15);
        assert_eq!(width_unperturbed(10, 0.0, 100.0), 0.0);
        assert!((width_unperturbed(10, 1.0, 200.0) * 2.0 - 1.125).abs() < 1e-15);
        assert_eq!(width_interacting(10, 1.0, 1.0), 8.0);
        assert_eq!(width_interacting(10, 1.0, 0.0), 0.0);
        assert_eq!(width_interacting(3, 2.0, 0.5), 1.0);
    }

    #[test]
    fn crossover_and_overlap() {
        assert!((crossover_j0(10, 1.0, 100.0) - 0.125).abs() < 1e-15);
        let o = overlap_jb(10, 1.0, 100.0);
        assert!((o.jb - 10.0).abs() < 1e-15);
        assert!(o.jb <= 15.0 && 15.0 <= 2.0 * o.jb);
        assert!((o.compatibility_bound - 1.25f64.sqrt()).abs() < 1e-15);
        assert!(!o.overlaps_for_any_j);
        assert!((o.any_j_min_length - 2.0 * 100f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!(overlap_jb(10, 1.0, 1e12).jb > 1e10);
        assert!(overlap_jb(64, 1.0, 100.0).overlaps_for_any_j);
    }

    #[test]
    fn delocalization_borders() {
        let n = deloc_border(CouplingKind::N, 10, 1.0, 100.0).unwrap();
        assert!((n.j_cr - 0.04).abs() < 1e-15);
        assert!((n.delta_e_f - 0.085).abs() < 1e-15);
        assert_eq!(n.m_f, 5.0);
        let a = deloc_border(CouplingKind::A, 10, 1.0, 100.0).unwrap();
        assert_eq!(a.j_cr, n.j_cr);
        assert_eq!(a.m_f, 25.0);
        assert!((a.delta_e_f - 0.5).abs() < 1e-15);
        assert!((a.d_f - a.delta_e_f / a.m_f).abs() < 1e-15);
        let nn = deloc_border(CouplingKind::NN, 10, 1.0, 100.0).unwrap();
        assert_eq!(nn.j_cr, n.j_cr);
        assert!(deloc_border(CouplingKind::N, 10, 0.0, 100.0).unwrap().j_cr == 0.0);
        assert!(deloc_border(CouplingKind::Custom, 10, 1.0, 100.0).is_err());
    }

    #[test]
    fn chaos_border_values_and_limits() {
        let jc = chaos_border(12, 1.0, 100.0);
        assert!((jc - 134.29).abs() < 0.01, "{jc}");
        assert!((chaos_border(12, 1.0, 1e-9) - 16.0).abs() < 1e-9);
        assert!((chaos_border(1_000_000, 1.0, 100.0) - 16.0).abs() < 1e-3);
    }

    #[test]
    fn homogeneous_border() {
        assert_eq!(deloc_border_homogeneous(10, 100.0, 0.0).j_cr, 0.0);
        assert!((deloc_border_homogeneous(10, 100.0, 1.0).j_cr - 2.5e-4).abs() < 1e-18);
        let a = deloc_border_homogeneous(10, 100.0, 3.0).j_cr;
        let b = deloc_border_homogeneous(20, 100.0, 3.0).j_cr;
        assert!((a - 2.0 * b).abs() < 1e-15);
    }

    #[test]
    fn quadratic_exponents() {
        assert_eq!(quadratic_gradient_scaling(CouplingKind::N, 10, 0.1, 100.0).unwrap().unwrap().exponent, 2);
        assert_eq!(quadratic_gradient_scaling(CouplingKind::A, 10, 0.1, 100.0).unwrap().unwrap().exponent, 1);
        assert_eq!(quadratic_gradient_scaling(CouplingKind::N, 10, 0.0, 100.0).unwrap(), None);
        let q = quadratic_gradient_scaling(CouplingKind::N, 10, 0.5, 100.0).unwrap().unwrap();
        assert!((q.delta_e_f_scale - 2.5).abs() < 1e-12);
    }

    #[test]
    fn estimates_follow_the_profile() {
        let p = RawParams::gradient_chain(12, 100.0, 1.0, 1.0).build().unwrap();
        let e = estimate(&p);
        assert_eq!(e.n_cb, Some(924));
        assert_eq!(e.j_cr_homogeneous, None);
        assert!(e.rows().iter().all(|(_, v)| v.is_finite() && *v > 0.0));

        let h = RawParams::gradient_chain(9, 100.0, 1.0, 1.0)
            .with_profile(FieldProfile::Homogeneous { spread: 2.0, seed: 1 })
            .with_coupling(CouplingSpec::uniform(CouplingKind::A, 1.0))
            .build()
            .unwrap();
        let e = estimate(&h);
        assert_eq!(e.n_cb, None);
        assert!((e.j_cr_homogeneous.unwrap() - 4.0 / 3600.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn borders_are_scale_invariant(l in 3usize..40, a in 0.1f64..10.0, omega in 1.0f64..1e4, lambda in 0.01f64..100.0) {
            let base = deloc_border(CouplingKind::N, l, a, omega).unwrap();
            let scaled = deloc_border(CouplingKind::N, l, lambda * a, lambda * omega).unwrap();
            let r0 = base.j_cr * omega / (a * a);
            let r1 = scaled.j_cr * lambda * omega / (lambda * a * lambda * a);
            prop_assert!((r0 - r1).abs() < 1e-12 * r0);
            prop_assert!((scaled.j_cr - lambda * base.j_cr).abs() <= 1e-12 * scaled.j_cr);
            let lf = l as f64;
            let c0 = chaos_border(l, a, omega) * lf / (a * a * lf * lf + omega * omega).sqrt();
            let (sa, so) = (lambda * a, lambda * omega);
            let c1 = chaos_border(l, sa, so) * lf / (sa * sa * lf * lf + so * so).sqrt();
            prop_assert!((c0 - c1).abs() < 1e-12 * c0);
            prop_assert!((chaos_border(l, sa, so) - lambda * chaos_border(l, a, omega)).abs() <= 1e-12 * chaos_border(l, sa, so));
        }

        #[test]
        fn n_and_a_borders_coincide(l in 2usize..64, a in 0.0f64..10.0, omega in 0.1f64..1e4) {
            let n = deloc_border(CouplingKind::N, l, a, omega).unwrap();
            let all = deloc_border(CouplingKind::A, l, a, omega).unwrap();
            prop_assert_eq!(n.j_cr, all.j_cr);
            prop_assert_eq!(n.d_f, all.d_f);
        }

        #[test]
        fn equal_widths_at_the_crossover(l in 3usize..64, a in 0.01f64..10.0, omega in 0.1f64..1e4) {
            let w0 = width_unperturbed(l, a, omega);
            let w1 = width_interacting(l, a, crossover_j0_unsimplified(l, a, omega));
            prop_assert!((w0 - w1).abs() <= 1e-12 * w0);
            let lf = l as f64;
            let ratio = crossover_j0(l, a, omega) / crossover_j0_unsimplified(l, a, omega);
            prop_assert!((ratio - (lf - 2.0) / (lf - 1.0)).abs() < 1e-12);
        }
    }
}
