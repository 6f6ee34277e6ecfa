//! Clifford theory for `G ⊇ H` with `G/H` abelian (a quotient of `F_q^x`
//! through the determinant): if `chi` is irreducible then
//! `Res_H chi = m·(rho_1 + ... + rho_t)`, and
//! `<Res chi, Res chi>_H = m²·t = #{omega ∈ (G/H)^ : chi ⊗ omega = chi}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sign_coherence, verify_restriction_theorem, Lab};
use crate::classfn::{nearest_integer, ClassFunction, TOLERANCE};
use crate::dlchar::cuspidal_character;
use crate::error::{Error, Result};
use crate::group::GroupModel;
use crate::torus::{CharIndex, TorusKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityCandidate {
    pub m: u32,
    pub t: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub q: u32,
    /// Label of the restricted character.
    pub character: String,
    pub torus: Option<TorusKind>,
    pub theta: Option<CharIndex>,
    /// `|D|` for the subgroup `H = {g : det g ∈ D}`.
    pub d_order: u32,
    /// Whether the restriction identity for `R_{T,theta}` is meant to hold
    /// for this subgroup. Only `SL2` qualifies; the other determinant
    /// subgroups are analyzed for multiplicities alone.
    pub theorem_applies: bool,
    /// Max deviation in the restriction identity, when `chi` comes from a
    /// torus datum and the identity applies.
    pub theorem_deviation: Option<f64>,
    pub dim_character: i64,
    /// `<Res chi, Res chi>_H`.
    pub restriction_norm: i64,
    /// Number of characters `omega` of `G/H` with `chi ⊗ omega = chi`.
    pub twist_stabilizer_size: u32,
    /// All `(m, t)` with `m²·t = restriction_norm` and `m·t | dim chi`.
    pub candidates: Vec<MultiplicityCandidate>,
    pub conclusive: bool,
    pub multiplicity: Option<u32>,
    pub component_count: Option<u32>,
    /// `[G : I]` for the inertia group `I` of a component.
    pub inertia_index: Option<u32>,
    pub dim_components: Option<i64>,
    /// `restriction_norm == twist_stabilizer_size`.
    pub clifford_consistent: bool,
    pub regular: Option<bool>,
    pub regular_h: Option<bool>,
    pub regular_in_g: Option<bool>,
    pub sign_coherent: Option<bool>,
    pub prediction_matched: Option<bool>,
}

/// Analyzes `Res_h chi` for an irreducible `chi` on a determinant subgroup
/// `G ⊇ h`.
pub fn clifford_analyze(chi: &ClassFunction, h: &std::sync::Arc<GroupModel>, label: &str) -> Result<RestrictionReport> {
    let g = chi.owner();
    let norm = chi.norm_sq();
    if (norm - 1.0).abs() > TOLERANCE {
        return Err(Error::NotIrreducible(norm));
    }
    let (Some(dg), Some(dh)) = (g.det_order(), h.det_order()) else {
        return Err(Error::NotContained {
            sub: h.label(),
            sup: g.label(),
        });
    };
    if dg % dh != 0 || g.q() != h.q() {
        return Err(Error::NotContained {
            sub: h.label(),
            sup: g.label(),
        });
    }
    // characters of F_q^x trivial on D_h, counted once each as functions on G
    let twist_stabilizer_size = (0..dg / dh)
        .filter(|i| chi.twist(i * dh).approx_eq(chi))
        .count() as u32;

    let res = chi.restrict(h)?;
    let n = nearest_integer(res.inner_product(&res)?)?;
    let dim = nearest_integer(chi.degree())?;

    let candidates: Vec<MultiplicityCandidate> = (1..)
        .take_while(|m| (m * m) as i64 <= n)
        .filter(|m| n % (m * m) as i64 == 0)
        .map(|m| MultiplicityCandidate {
            m,
            t: (n / (m * m) as i64) as u32,
        })
        .filter(|c| dim % (c.m * c.t) as i64 == 0)
        .collect();
    let unique = (candidates.len() == 1).then(|| candidates[0]);

    Ok(RestrictionReport {
        q: g.q(),
        character: label.to_string(),
        torus: None,
        theta: None,
        d_order: dh,
        theorem_applies: h.is_sl2(),
        theorem_deviation: None,
        dim_character: dim,
        restriction_norm: n,
        twist_stabilizer_size,
        conclusive: unique.is_some(),
        multiplicity: unique.map(|c| c.m),
        component_count: unique.map(|c| c.t),
        inertia_index: unique.map(|c| c.t),
        dim_components: unique.map(|c| dim / (c.m * c.t) as i64),
        candidates,
        clifford_consistent: n == twist_stabilizer_size as i64,
        regular: None,
        regular_h: None,
        regular_in_g: None,
        sign_coherent: None,
        prediction_matched: None,
    })
}

/// Predicted shape of the restriction of a cuspidal character to `SL2`:
/// always multiplicity free, and a single component exactly when `theta_H`
/// is regular in `G`. Returns whether the analyzed report agrees.
pub fn regularity_prediction(report: &RestrictionReport) -> Option<bool> {
    let regular_in_g = report.regular_in_g?;
    Some(
        report.conclusive
            && report.multiplicity == Some(1)
            && (report.component_count == Some(1)) == regular_in_g,
    )
}

/// Full report for the cuspidal `-R_{T_ns, theta_j}` restricted to `SL2`.
pub fn cuspidal_report(lab: &Lab, q: u32, j: u32) -> Result<RestrictionReport> {
    let g = lab.gl2(q)?;
    let h = lab.sl2(q)?;
    let index = CharIndex::Nonsplit(j);
    let ev = lab.evaluator(q, q - 1, TorusKind::Nonsplit)?;
    let torus = ev.torus();
    let theta = torus.character(index)?;
    let chi = cuspidal_character(&ev, &theta)?;
    let mut report = clifford_analyze(&chi, &h, &format!("cuspidal j={j}"))?;

    let (t_h, theta_h) = super::restrict_datum(torus, &theta, &h)?;
    report.torus = Some(TorusKind::Nonsplit);
    report.theta = Some(index);
    report.theorem_deviation = Some(verify_restriction_theorem(lab, q, index)?);
    report.regular = Some(torus.is_regular(&theta));
    report.regular_h = Some(t_h.is_regular(&theta_h));
    report.regular_in_g = Some(t_h.is_regular_in(&theta_h, &g));
    report.sign_coherent = Some(sign_coherence(lab, q, index)? > 0.0);
    report.prediction_matched = regularity_prediction(&report);
    Ok(report)
}

/// Report for `±R_{T,theta}` of `GL2(F_q)` restricted to the determinant
/// subgroup with `|D| = d_order`. The sign is chosen so the character is
/// positive; `R` must be irreducible up to sign.
///
/// The restriction identity is only checked for `SL2`, and the regularity
/// prediction is only made there.
pub fn restriction_report(lab: &Lab, q: u32, index: CharIndex, d_order: u32) -> Result<RestrictionReport> {
    let g = lab.gl2(q)?;
    let h = lab.group(q, crate::group::GroupKind::DetSubgroup { d_order })?;
    let torus = lab.torus(q, q - 1, index.kind())?;
    let theta = torus.character(index)?;
    let mut chi = lab.gl2_character(q, index)?;
    if chi.degree().re < 0.0 {
        chi = -&chi;
    }
    let mut report = clifford_analyze(&chi, &h, &format!("R({}, {index})", index.kind()))?;
    let (t_h, theta_h) = super::restrict_datum(&torus, &theta, &h)?;
    report.torus = Some(index.kind());
    report.theta = Some(index);
    report.regular = Some(torus.is_regular(&theta));
    report.regular_h = Some(t_h.is_regular(&theta_h));
    report.regular_in_g = Some(t_h.is_regular_in(&theta_h, &g));
    if h.is_sl2() {
        report.theorem_deviation = Some(verify_restriction_theorem(lab, q, index)?);
        report.sign_coherent = Some(sign_coherence(lab, q, index)? > 0.0);
        report.prediction_matched = regularity_prediction(&report);
    } else {
        report.regular_in_g = None;
    }
    Ok(report)
}

/// Cuspidal parameters by index arithmetic alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCensus {
    /// Frobenius orbits `{j, qj}` of regular nonsplit indices.
    pub orbits: usize,
    /// Orbits with `2j ≡ 0 mod (q+1)`, where the restriction should split.
    pub split: usize,
}

/// Orbit representatives (smallest member) of regular nonsplit indices.
fn cuspidal_orbit_reps(q: u32) -> Vec<u32> {
    let n = q * q - 1;
    (1..n)
        .filter(|j| j % (q + 1) != 0)
        .filter(|&j| j <= (j * q) % n)
        .collect()
}

pub fn index_census(q: u32) -> IndexCensus {
    let reps = cuspidal_orbit_reps(q);
    IndexCensus {
        orbits: reps.len(),
        split: reps.iter().filter(|&&j| (2 * j) % (q + 1) == 0).count(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub q: u32,
    pub cuspidal_orbits: usize,
    pub single_component: usize,
    pub two_components: usize,
    pub other: usize,
    pub index_census: IndexCensus,
    pub matches_index_census: bool,
    pub all_multiplicity_free: bool,
    pub all_predictions_matched: bool,
    pub dimension_accounting_ok: bool,
    pub max_theorem_deviation: f64,
    pub reports: Vec<RestrictionReport>,
}

/// Restricts every cuspidal character of `GL2(F_q)` to `SL2(F_q)`.
pub fn restriction_census(lab: &Lab, q: u32) -> Result<CensusSummary> {
    let reps = cuspidal_orbit_reps(q);
    let reports = reps
        .par_iter()
        .map(|&j| cuspidal_report(lab, q, j))
        .collect::<Result<Vec<_>>>()?;
    let count_t = |t: u32| reports.iter().filter(|r| r.component_count == Some(t)).count();
    let single_component = count_t(1);
    let two_components = count_t(2);
    let idx = index_census(q);
    Ok(CensusSummary {
        q,
        cuspidal_orbits: reports.len(),
        single_component,
        two_components,
        other: reports.len() - single_component - two_components,
        index_census: idx,
        matches_index_census: idx.orbits == reports.len() && idx.split == two_components,
        all_multiplicity_free: reports.iter().all(|r| r.multiplicity == Some(1)),
        all_predictions_matched: reports.iter().all(|r| r.prediction_matched == Some(true)),
        dimension_accounting_ok: reports.iter().all(|r| {
            match (r.multiplicity, r.component_count, r.dim_components) {
                (Some(m), Some(t), Some(d)) => d > 0 && m as i64 * t as i64 * d == r.dim_character,
                _ => false,
            }
        }),
        max_theorem_deviation: reports
            .iter()
            .filter_map(|r| r.theorem_deviation)
            .fold(0.0, f64::max),
        reports,
    })
}

#[derive(Clone, Debug)]
pub struct Irreducible {
    pub label: String,
    pub character: ClassFunction,
}

/// All irreducible characters of `GL2(F_q)`, assembled from Deligne–Lusztig
/// characters: `omega∘det = (R_s + R_ns)/2` and `St·omega = (R_s - R_ns)/2`
/// for `theta = omega` on both tori, `R_s(j1, j2)` for `j1 < j2`, and
/// `-R_ns(j)` for one `j` per cuspidal orbit.
pub fn gl2_irreducibles(lab: &Lab, q: u32) -> Result<Vec<Irreducible>> {
    let mut out = Vec::new();
    for k in 0..q - 1 {
        let rs = lab.gl2_character(q, CharIndex::Split(k, k))?;
        let rns = lab.gl2_character(q, CharIndex::Nonsplit(k * (q + 1)))?;
        out.push(Irreducible {
            label: format!("linear k={k}"),
            character: (&rs + &rns).scale(0.5),
        });
        out.push(Irreducible {
            label: format!("steinberg k={k}"),
            character: (&rs - &rns).scale(0.5),
        });
    }
    for j1 in 0..q - 1 {
        for j2 in j1 + 1..q - 1 {
            out.push(Irreducible {
                label: format!("principal j=({j1},{j2})"),
                character: lab.gl2_character(q, CharIndex::Split(j1, j2))?,
            });
        }
    }
    for j in cuspidal_orbit_reps(q) {
        out.push(Irreducible {
            label: format!("cuspidal j={j}"),
            character: -&lab.gl2_character(q, CharIndex::Nonsplit(j))?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupKind;

    #[test]
    fn trivial_restricts_to_trivial() {
        let lab = Lab::new();
        let g = lab.gl2(5).unwrap();
        let h = lab.sl2(5).unwrap();
        let r = clifford_analyze(&ClassFunction::trivial(g), &h, "trivial").unwrap();
        assert_eq!((r.multiplicity, r.component_count), (Some(1), Some(1)));
        assert!(r.clifford_consistent);
    }

    #[test]
    fn cuspidal_examples_q5() {
        let lab = Lab::new();
        let r3 = cuspidal_report(&lab, 5, 3).unwrap();
        assert_eq!(r3.restriction_norm, 2);
        assert_eq!((r3.multiplicity, r3.component_count), (Some(1), Some(2)));
        assert_eq!(r3.dim_components, Some(2));
        assert_eq!(r3.regular, Some(true));
        assert_eq!(r3.regular_h, Some(false));
        assert_eq!(r3.regular_in_g, Some(false));
        assert_eq!(r3.prediction_matched, Some(true));

        let r1 = cuspidal_report(&lab, 5, 1).unwrap();
        assert_eq!(r1.restriction_norm, 1);
        assert_eq!((r1.multiplicity, r1.component_count), (Some(1), Some(1)));
        assert_eq!(r1.dim_components, Some(4));
        assert_eq!(r1.prediction_matched, Some(true));
        assert_eq!(r1.sign_coherent, Some(true));
    }

    #[test]
    fn rejects_reducible_input() {
        let lab = Lab::new();
        let h = lab.sl2(3).unwrap();
        let r = lab.gl2_character(3, CharIndex::Split(0, 0)).unwrap();
        assert!(matches!(clifford_analyze(&r, &h, "R"), Err(Error::NotIrreducible(_))));
        assert_eq!(cuspidal_report(&lab, 5, 6).unwrap_err(), Error::NotRegular);
    }

    #[test]
    fn general_reports() {
        let lab = Lab::new();
        let c = restriction_report(&lab, 5, CharIndex::Nonsplit(3), 1).unwrap();
        let mut cusp = cuspidal_report(&lab, 5, 3).unwrap();
        cusp.character = c.character.clone();
        assert_eq!(c, cusp);
        // principal series with theta_H of order 2 splits on SL2
        let p = restriction_report(&lab, 5, CharIndex::Split(0, 2), 1).unwrap();
        assert_eq!((p.multiplicity, p.component_count, p.dim_components), (Some(1), Some(2), Some(3)));
        assert_eq!(p.prediction_matched, Some(true));
        let p = restriction_report(&lab, 5, CharIndex::Split(0, 1), 2).unwrap();
        assert_eq!(p.component_count, Some(1));
        assert_eq!(p.prediction_matched, None);
        assert!(matches!(
            restriction_report(&lab, 5, CharIndex::Split(1, 1), 1),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn index_census_counts() {
        assert_eq!(index_census(5), IndexCensus { orbits: 10, split: 2 });
        assert_eq!(index_census(3), IndexCensus { orbits: 3, split: 1 });
        assert_eq!(index_census(7), IndexCensus { orbits: 21, split: 3 });
        // 4 ∤ j leaves {1, 2, 3, 5, 6, 7}, orbits {1,3} {2,6} {5,7}
        assert_eq!(cuspidal_orbit_reps(3), vec![1, 2, 5]);
    }

    #[test]
    fn census_q3() {
        let lab = Lab::new();
        let c = restriction_census(&lab, 3).unwrap();
        assert_eq!(c.cuspidal_orbits, 3);
        assert_eq!(c.two_components, 1);
        let split: Vec<_> = c.reports.iter().filter(|r| r.component_count == Some(2)).collect();
        assert_eq!(split[0].theta, Some(CharIndex::Nonsplit(2)));
        assert!(c.matches_index_census && c.all_predictions_matched && c.dimension_accounting_ok);
    }

    #[test]
    fn irreducibles_q3() {
        let lab = Lab::new();
        let g = lab.gl2(3).unwrap();
        let irr = gl2_irreducibles(&lab, 3).unwrap();
        assert_eq!(irr.len(), g.classes().len());
        let dims: f64 = irr.iter().map(|i| i.character.degree().re.powi(2)).sum();
        assert!((dims - g.order() as f64).abs() < TOLERANCE);
        for (a, x) in irr.iter().enumerate() {
            for (b, y) in irr.iter().enumerate() {
                let ip = x.character.inner_product(&y.character).unwrap();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip.re - expected).abs() < TOLERANCE, "{} vs {}", x.label, y.label);
            }
        }
        // linear characters really are omega∘det
        for k in 0..2 {
            let lin = &irr[2 * k as usize].character;
            assert!(lin.approx_eq(&ClassFunction::det_character(g.clone(), k)));
        }
    }

    #[test]
    fn clifford_consistency_against_all_det_subgroups() {
        let lab = Lab::new();
        let q = 5;
        for irr in gl2_irreducibles(&lab, q).unwrap() {
            for d in [1u32, 2, 4] {
                let h = lab.group(q, GroupKind::DetSubgroup { d_order: d }).unwrap();
                let r = clifford_analyze(&irr.character, &h, &irr.label).unwrap();
                assert!(r.clifford_consistent, "{} on |D|={d}", irr.label);
                assert_eq!(r.multiplicity, Some(1), "{} on |D|={d}", irr.label);
            }
        }
    }
}
