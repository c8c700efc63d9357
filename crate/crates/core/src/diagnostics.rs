//! Hypothesis ratios and averaged error terms behind the simplified
//! multi-edge statements. `C(ρ)` and the exponential multipliers are
//! transcendental and reported as `f64`; nothing here is certified.

use num_traits::Zero;

use crate::bipartite::{bipartite_avoidance_leading, bipartite_leading_term};
use crate::bound::BoundError;
use crate::degree::{alpha_from_profile, DegreeProfile};
use crate::generic::{avoidance_leading, leading_term};
use crate::model::{BipartiteGraph, DegreeSequence, LabelledGraph, ModelError};
use crate::rational::{int, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticMode {
    /// `X ⊆ G`.
    Contain,
    /// `Y ∩ G = ∅`.
    Forbid,
}

/// An averaged quantity from the simplification, with the cap it never exceeds.
#[derive(Clone, Debug, PartialEq)]
pub struct Average {
    pub name: &'static str,
    /// `None` when the event graph is empty.
    pub value: Option<Rational>,
    pub ceiling: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticReport {
    pub mode: DiagnosticMode,
    pub bipartite: bool,
    pub event_edges: usize,
    /// `Π(X)` (or `Π′`) in contain mode, `Φ(Y)` (or `Φ′`) in forbid mode.
    pub pi_or_phi: Rational,
    /// Hypothesis ratio guarding the upper bound; `None` when its denominator vanishes.
    pub rho_upper: Option<Rational>,
    pub rho_lower: Option<Rational>,
    pub c_upper: Option<f64>,
    pub c_lower: Option<f64>,
    pub averages: Vec<Average>,
    /// `Λ` or `Λ′`; contain mode only.
    pub lambda_cap: Option<Rational>,
    /// `exp(-C · m · D(avg) / denom)`, an estimate of the largest upper-bound product.
    pub upper_multiplier: Option<f64>,
    /// `exp(C · m · D(avg) / denom)`, an estimate of the smallest lower-bound product.
    pub lower_multiplier: Option<f64>,
}

impl DiagnosticReport {
    pub fn rho_upper_below_one(&self) -> bool {
        self.rho_upper.as_ref().is_some_and(|r| r < &int(1))
    }

    pub fn rho_lower_below_one(&self) -> bool {
        self.rho_lower.as_ref().is_some_and(|r| r < &int(1))
    }

    pub fn average(&self, name: &str) -> Option<&Average> {
        self.averages.iter().find(|a| a.name == name)
    }
}

/// `C(ρ) = ln(1 - ρ) / ρ`, extended by its limit `-1` at `ρ = 0`; `None` for `ρ ≥ 1`.
pub fn c_of_rho(rho: &Rational) -> Option<f64> {
    let r = to_f64(rho);
    if rho.is_zero() {
        Some(-1.0)
    } else if r < 1.0 && *rho < int(1) {
        Some((-r).ln_1p() / r)
    } else {
        None
    }
}

fn frac(num: Rational, den: u64) -> Option<Rational> {
    (den > 0).then(|| num / int(den))
}

fn sum_profile(a: &[u64], b: &[u64], c: Option<&[u64]>) -> DegreeProfile {
    DegreeProfile::from_values((0..a.len()).map(|i| a[i] + b[i] + c.map_or(0, |c| c[i])))
}

fn multiplier(
    c: Option<f64>,
    sign: f64,
    edges: usize,
    d_avg: Option<Rational>,
    den: u64,
) -> Option<f64> {
    let c = c?;
    if den == 0 {
        return None;
    }
    let d = to_f64(&d_avg?);
    Some((sign * c * edges as f64 * d / den as f64).exp())
}

fn eval(p: &DegreeProfile, x: &Rational) -> Rational {
    p.eval(x).expect("nonnegative argument")
}

fn weighted_average(
    weights: &[u64],
    values: impl Fn(usize) -> Rational,
    total: u64,
) -> Option<Rational> {
    if total == 0 {
        return None;
    }
    let mut acc = Rational::zero();
    for (i, &w) in weights.iter().enumerate() {
        if w > 0 {
            acc += values(i) * int(w);
        }
    }
    Some(acc / int(total))
}

fn max_on(boundary: &[usize], values: impl Fn(usize) -> u64) -> u64 {
    boundary.iter().map(|&w| values(w)).max().unwrap_or(0)
}

/// `α` at the vertex minimising `g - h`, from a prepared profile.
fn gamma_from(p: &DegreeProfile, g: &[u64], h: &[u64]) -> Result<Rational, BoundError> {
    let mut min = u64::MAX;
    for (w, (&a, &b)) in g.iter().zip(h).enumerate() {
        min = min.min(
            a.checked_sub(b)
                .ok_or(ModelError::NegativeDegree { vertex: w })?,
        );
    }
    Ok(alpha_from_profile(p, if min == u64::MAX { 0 } else { min }))
}

fn check(n: usize, g: &LabelledGraph) -> Result<(), BoundError> {
    if g.vertex_count() != n {
        return Err(ModelError::SizeMismatch {
            expected: n,
            found: g.vertex_count(),
        }
        .into());
    }
    Ok(())
}

/// Diagnostics for containment of `X` (mode `Contain`) or avoidance of `Y` given `L0` (mode `Forbid`).
pub fn corollary_diagnostics(
    d: &DegreeSequence,
    event: &LabelledGraph,
    l: &LabelledGraph,
    mode: DiagnosticMode,
) -> Result<DiagnosticReport, BoundError> {
    check(d.len(), event)?;
    check(d.len(), l)?;
    if let Some((a, b)) = event.first_common_edge(l) {
        return Err(ModelError::Overlap(a, b).into());
    }
    let two_m = d.total();
    if two_m % 2 == 1 {
        return Err(BoundError::OddDegreeSum);
    }
    let m_g = two_m / 2;
    let k = event.edge_count();
    let dv = d.as_slice();
    let xv = event.degree_sequence().as_slice().to_vec();
    let lv = l.degree_sequence().as_slice().to_vec();
    let boundary = event.boundary();
    let base = DegreeProfile::from_values(dv.iter().copied());
    let two = int(2);
    match mode {
        DiagnosticMode::Contain => {
            let den = m_g
                .checked_sub(k as u64)
                .ok_or(BoundError::DivisionByZero)?;
            let dl = sum_profile(dv, &lv, None);
            let delta_dl = max_on(&boundary, |w| dv[w] + lv[w]);
            let delta_d = max_on(&boundary, |w| dv[w]);
            let gamma = gamma_from(&dl, dv, &xv)?;
            let rho_upper = frac(int(base.eval_int(delta_dl)), den);
            let rho_lower = frac(eval(&base, &(&gamma + &two)), den);
            let kappa = weighted_average(&xv, |i| int(dv[i] + lv[i]), 2 * k as u64);
            let mu = weighted_average(
                &xv,
                |i| alpha_from_profile(&dl, dv[i].saturating_sub(xv[i])),
                2 * k as u64,
            );
            let c_upper = rho_upper.as_ref().and_then(c_of_rho);
            let c_lower = rho_lower.as_ref().and_then(c_of_rho);
            let upper_multiplier = multiplier(
                c_upper,
                -1.0,
                k,
                kappa.as_ref().map(|x| eval(&base, x)),
                den,
            );
            let lower_multiplier = multiplier(
                c_lower,
                1.0,
                k,
                mu.as_ref().map(|x| eval(&base, &(x + &two))),
                den,
            );
            Ok(DiagnosticReport {
                mode,
                bipartite: false,
                event_edges: k,
                pi_or_phi: leading_term(d, event)?,
                rho_upper,
                rho_lower,
                c_upper,
                c_lower,
                averages: vec![
                    Average {
                        name: "kappa",
                        value: kappa,
                        ceiling: int(delta_dl),
                    },
                    Average {
                        name: "mu",
                        value: mu,
                        ceiling: gamma,
                    },
                ],
                lambda_cap: frac(int(k as u64 * delta_d * delta_d), den),
                upper_multiplier,
                lower_multiplier,
            })
        }
        DiagnosticMode::Forbid => {
            if m_g == 0 {
                return Err(BoundError::DivisionByZero);
            }
            let dly = sum_profile(dv, &lv, Some(&xv));
            let zeros = vec![0; dv.len()];
            let gamma = gamma_from(&dly, dv, &zeros)?;
            let delta = max_on(&boundary, |w| dv[w] + lv[w] + xv[w]);
            let rho_upper = frac(eval(&base, &(&gamma + &two)), m_g);
            let rho_lower = frac(int(base.eval_int(delta)), m_g);
            let lambda = weighted_average(&xv, |i| alpha_from_profile(&dly, dv[i]), 2 * k as u64);
            let eta = weighted_average(&xv, |i| int(dv[i] + lv[i] + xv[i]), 2 * k as u64);
            let c_upper = rho_upper.as_ref().and_then(c_of_rho);
            let c_lower = rho_lower.as_ref().and_then(c_of_rho);
            let upper_multiplier = multiplier(
                c_upper,
                -1.0,
                k,
                lambda.as_ref().map(|x| eval(&base, &(x + &two))),
                m_g,
            );
            let lower_multiplier =
                multiplier(c_lower, 1.0, k, eta.as_ref().map(|x| eval(&base, x)), m_g);
            Ok(DiagnosticReport {
                mode,
                bipartite: false,
                event_edges: k,
                pi_or_phi: avoidance_leading(d, event)?,
                rho_upper,
                rho_lower,
                c_upper,
                c_lower,
                averages: vec![
                    Average {
                        name: "lambda",
                        value: lambda,
                        ceiling: gamma,
                    },
                    Average {
                        name: "eta",
                        value: eta,
                        ceiling: int(delta),
                    },
                ],
                lambda_cap: None,
                upper_multiplier,
                lower_multiplier,
            })
        }
    }
}

fn side_vec(d: &DegreeSequence) -> Vec<u64> {
    d.as_slice().to_vec()
}

/// Bipartite diagnostics; `l` is `L` in contain mode and `L0` in forbid mode.
pub fn corollary_diagnostics_bipartite(
    s: &DegreeSequence,
    t: &DegreeSequence,
    event: &BipartiteGraph,
    l: &BipartiteGraph,
    mode: DiagnosticMode,
) -> Result<DiagnosticReport, BoundError> {
    for g in [event, l] {
        let (a, b) = g.sides();
        if a != s.len() || b != t.len() {
            return Err(ModelError::SizeMismatch {
                expected: s.len() + t.len(),
                found: a + b,
            }
            .into());
        }
    }
    if let Some((a, b)) = event.first_common_edge(l) {
        return Err(ModelError::Overlap(a, b).into());
    }
    let m_g = s.total();
    if m_g != t.total() {
        return Err(BoundError::UnbalancedSides);
    }
    let k = event.edge_count();
    let (sv, tv) = (side_vec(s), side_vec(t));
    let (xs, xt) = event.degree_sequences();
    let (xs, xt) = (side_vec(&xs), side_vec(&xt));
    let (ls, lt) = l.degree_sequences();
    let (ls, lt) = (side_vec(&ls), side_vec(&lt));
    let (bs, bt) = event.boundary();
    let s_prof = DegreeProfile::from_values(sv.iter().copied());
    let t_prof = DegreeProfile::from_values(tv.iter().copied());
    let km = k as u64;
    match mode {
        DiagnosticMode::Contain => {
            let den = m_g.checked_sub(km).ok_or(BoundError::DivisionByZero)?;
            let tm = sum_profile(&tv, &lt, None);
            let sl = sum_profile(&sv, &ls, None);
            let delta_tm = max_on(&bt, |w| tv[w] + lt[w]);
            let delta_sl = max_on(&bs, |w| sv[w] + ls[w]);
            let gamma_s = gamma_from(&tm, &sv, &xs)?;
            let gamma_t = gamma_from(&sl, &tv, &xt)?;
            let rho_upper = frac(
                int(s_prof.eval_int(delta_tm) + t_prof.eval_int(delta_sl)),
                den,
            );
            let rho_lower = frac(eval(&s_prof, &gamma_s) + eval(&t_prof, &gamma_t), den);
            let kappa_s = weighted_average(&xs, |i| int(sv[i] + ls[i]), km);
            let kappa_t = weighted_average(&xt, |i| int(tv[i] + lt[i]), km);
            let mu_s = weighted_average(
                &xs,
                |i| alpha_from_profile(&tm, sv[i].saturating_sub(xs[i])),
                km,
            );
            let mu_t = weighted_average(
                &xt,
                |i| alpha_from_profile(&sl, tv[i].saturating_sub(xt[i])),
                km,
            );
            let c_upper = rho_upper.as_ref().and_then(c_of_rho);
            let c_lower = rho_lower.as_ref().and_then(c_of_rho);
            let up_avg = match (&kappa_s, &kappa_t) {
                (Some(ks), Some(kt)) => Some(eval(&s_prof, kt) + eval(&t_prof, ks)),
                _ => None,
            };
            let low_avg = match (&mu_s, &mu_t) {
                (Some(ms), Some(mt)) => Some(eval(&s_prof, ms) + eval(&t_prof, mt)),
                _ => None,
            };
            let ds = max_on(&bs, |w| sv[w]);
            let dt = max_on(&bt, |w| tv[w]);
            Ok(DiagnosticReport {
                mode,
                bipartite: true,
                event_edges: k,
                pi_or_phi: bipartite_leading_term(s, t, event)?,
                rho_upper,
                rho_lower,
                c_upper,
                c_lower,
                averages: vec![
                    Average {
                        name: "kappa_S",
                        value: kappa_s,
                        ceiling: int(delta_sl),
                    },
                    Average {
                        name: "kappa_T",
                        value: kappa_t,
                        ceiling: int(delta_tm),
                    },
                    Average {
                        name: "mu_S",
                        value: mu_s,
                        ceiling: gamma_s,
                    },
                    Average {
                        name: "mu_T",
                        value: mu_t,
                        ceiling: gamma_t,
                    },
                ],
                lambda_cap: frac(int(km * ds * dt), den),
                upper_multiplier: multiplier(c_upper, -1.0, k, up_avg, den),
                lower_multiplier: multiplier(c_lower, 1.0, k, low_avg, den),
            })
        }
        DiagnosticMode::Forbid => {
            if m_g == 0 {
                return Err(BoundError::DivisionByZero);
            }
            let tmz = sum_profile(&tv, &lt, Some(&xt));
            let sly = sum_profile(&sv, &ls, Some(&xs));
            let gamma_s = gamma_from(&tmz, &sv, &vec![0; sv.len()])?;
            let gamma_t = gamma_from(&sly, &tv, &vec![0; tv.len()])?;
            let delta_t = max_on(&bt, |w| tv[w] + lt[w] + xt[w]);
            let delta_s = max_on(&bs, |w| sv[w] + ls[w] + xs[w]);
            let rho_upper = frac(eval(&s_prof, &gamma_s) + eval(&t_prof, &gamma_t), m_g);
            let rho_lower = frac(
                int(s_prof.eval_int(delta_t) + t_prof.eval_int(delta_s)),
                m_g,
            );
            let lambda_s = weighted_average(&xs, |i| alpha_from_profile(&tmz, sv[i]), km);
            let lambda_t = weighted_average(&xt, |i| alpha_from_profile(&sly, tv[i]), km);
            let eta_s = weighted_average(&xs, |i| int(sv[i] + ls[i] + xs[i]), km);
            let eta_t = weighted_average(&xt, |i| int(tv[i] + lt[i] + xt[i]), km);
            let c_upper = rho_upper.as_ref().and_then(c_of_rho);
            let c_lower = rho_lower.as_ref().and_then(c_of_rho);
            let up_avg = match (&lambda_s, &lambda_t) {
                (Some(a), Some(b)) => Some(eval(&s_prof, a) + eval(&t_prof, b)),
                _ => None,
            };
            // An S-side sum s + l + y is paired with T, as in p.
            let low_avg = match (&eta_s, &eta_t) {
                (Some(a), Some(b)) => Some(eval(&t_prof, a) + eval(&s_prof, b)),
                _ => None,
            };
            Ok(DiagnosticReport {
                mode,
                bipartite: true,
                event_edges: k,
                pi_or_phi: bipartite_avoidance_leading(s, t, event)?,
                rho_upper,
                rho_lower,
                c_upper,
                c_lower,
                averages: vec![
                    Average {
                        name: "lambda_S",
                        value: lambda_s,
                        ceiling: gamma_s,
                    },
                    Average {
                        name: "lambda_T",
                        value: lambda_t,
                        ceiling: gamma_t,
                    },
                    Average {
                        name: "eta_S",
                        value: eta_s,
                        ceiling: int(delta_s),
                    },
                    Average {
                        name: "eta_T",
                        value: eta_t,
                        ceiling: int(delta_t),
                    },
                ],
                lambda_cap: None,
                upper_multiplier: multiplier(c_upper, -1.0, k, up_avg, m_g),
                lower_multiplier: multiplier(c_lower, 1.0, k, low_avg, m_g),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Part;
    use crate::rational::ratio;

    fn matching(n: usize) -> DegreeSequence {
        DegreeSequence::generic(vec![1; n])
    }

    #[test]
    fn c_of_rho_limits() {
        assert_eq!(c_of_rho(&int(0)), Some(-1.0));
        assert!(c_of_rho(&int(1)).is_none());
        let c = c_of_rho(&ratio(1, 2)).unwrap();
        assert!((c - 2.0 * (0.5f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn matching_contain_values() {
        // n = 20, X = {01}: m(G) = 10, D(1) = 1, γ = D(d, 1) / 1 = 1, D(3) = 3.
        let x = LabelledGraph::new(20, [(0, 1)]).unwrap();
        let r = corollary_diagnostics(
            &matching(20),
            &x,
            &LabelledGraph::empty(20),
            DiagnosticMode::Contain,
        )
        .unwrap();
        assert_eq!(r.rho_upper, Some(ratio(1, 9)));
        assert_eq!(r.rho_lower, Some(ratio(3, 9)));
        assert_eq!(r.lambda_cap, Some(ratio(1, 9)));
        assert_eq!(r.average("kappa").unwrap().value, Some(int(1)));
        assert_eq!(r.average("mu").unwrap().value, Some(int(1)));
        assert_eq!(r.pi_or_phi, ratio(1, 20));
        assert!(r.rho_upper_below_one() && r.rho_lower_below_one());
        let expect = (-(c_of_rho(&ratio(1, 9)).unwrap()) / 9.0).exp();
        assert!((r.upper_multiplier.unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn empty_event_has_undefined_averages() {
        let r = corollary_diagnostics(
            &matching(6),
            &LabelledGraph::empty(6),
            &LabelledGraph::empty(6),
            DiagnosticMode::Contain,
        )
        .unwrap();
        assert_eq!(r.pi_or_phi, int(1));
        assert!(r.averages.iter().all(|a| a.value.is_none()));
        assert_eq!(r.lambda_cap, Some(int(0)));
    }

    #[test]
    fn matching_forbid_values() {
        // Y = {01}, m(G) = 10; d + y = (2, 2, 1, ...) so γ = D(d+y, 1) = 2 and D(4) = 4.
        let y = LabelledGraph::new(20, [(0, 1)]).unwrap();
        let r = corollary_diagnostics(
            &matching(20),
            &y,
            &LabelledGraph::empty(20),
            DiagnosticMode::Forbid,
        )
        .unwrap();
        assert_eq!(r.rho_upper, Some(ratio(4, 10)));
        assert_eq!(r.rho_lower, Some(ratio(2, 10)));
        assert_eq!(r.average("lambda").unwrap().value, Some(int(2)));
        assert_eq!(r.average("eta").unwrap().value, Some(int(2)));
        assert_eq!(r.pi_or_phi, ratio(20, 21));
    }

    #[test]
    fn bipartite_contain_values() {
        let s = DegreeSequence::new(vec![1, 1, 1], Part::Left);
        let t = DegreeSequence::new(vec![1, 1, 1], Part::Right);
        let x = BipartiteGraph::new(3, 3, [(0, 0)]).unwrap();
        let r = corollary_diagnostics_bipartite(
            &s,
            &t,
            &x,
            &BipartiteGraph::empty(3, 3),
            DiagnosticMode::Contain,
        )
        .unwrap();
        // S(1) + T(1) = 2 over m(G) - m(X) = 2.
        assert_eq!(r.rho_upper, Some(int(1)));
        assert!(!r.rho_upper_below_one());
        assert!(r.c_upper.is_none() && r.upper_multiplier.is_none());
        assert_eq!(r.pi_or_phi, ratio(1, 3));
        assert_eq!(r.lambda_cap, Some(ratio(1, 2)));
        let empty = BipartiteGraph::empty(3, 3);
        let r0 = corollary_diagnostics_bipartite(&s, &t, &empty, &empty, DiagnosticMode::Contain)
            .unwrap();
        assert_eq!(r0.lambda_cap, Some(int(0)));
    }

    #[test]
    fn bipartite_forbid_values() {
        let s = DegreeSequence::new(vec![1, 1, 1], Part::Left);
        let t = DegreeSequence::new(vec![1, 1, 1], Part::Right);
        let y = BipartiteGraph::new(3, 3, [(0, 0)]).unwrap();
        let r = corollary_diagnostics_bipartite(
            &s,
            &t,
            &y,
            &BipartiteGraph::empty(3, 3),
            DiagnosticMode::Forbid,
        )
        .unwrap();
        assert_eq!(r.pi_or_phi, ratio(3, 4));
        assert_eq!(r.average("eta_S").unwrap().value, Some(int(2)));
        // γ over S uses t + z = (2, 1, 1) at residual 1: 2. S(2) + T(2) = 4 over 3.
        assert_eq!(r.rho_upper, Some(ratio(4, 3)));
    }
}
