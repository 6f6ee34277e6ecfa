//! Property suites over whole parameter ranges. Every suite produces one
//! [`SuiteResult`] per `q`, and results are merged in (suite, q) order so that
//! serialized summaries are byte-stable across runs and thread counts.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{coset_identity, restriction_census, verify_iso_invariance, verify_restriction_theorem, Lab};
use super::clifford::{clifford_analyze, gl2_irreducibles};
use crate::classfn::{nearest_integer, principal_series, TOLERANCE};
use crate::dlchar::GreenTable;
use crate::error::{Error, Result};
use crate::group::GroupKind;
use crate::torus::{CharIndex, TorusKind};

/// Random conjugators drawn per `(q, torus)` by the iso suite.
pub const ISO_SAMPLES: usize = 20;
/// Base seed for the iso suite; mixed with `q` and the torus kind.
pub const ISO_SEED: u64 = 0x0d1e_5eed;

const KINDS: [TorusKind; 2] = [TorusKind::Split, TorusKind::Nonsplit];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Restriction,
    SplitOracle,
    Orthogonality,
    Degrees,
    Clifford,
    Regularity,
    Coset,
    Iso,
    Green,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Restriction,
        Suite::SplitOracle,
        Suite::Orthogonality,
        Suite::Degrees,
        Suite::Clifford,
        Suite::Regularity,
        Suite::Coset,
        Suite::Iso,
        Suite::Green,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Restriction => "restriction",
            Suite::SplitOracle => "split_oracle",
            Suite::Orthogonality => "orthogonality",
            Suite::Degrees => "degrees",
            Suite::Clifford => "clifford",
            Suite::Regularity => "regularity",
            Suite::Coset => "coset",
            Suite::Iso => "iso",
            Suite::Green => "green",
            Suite::All => "all",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::EACH.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::EACH.iter().map(|x| x.name()).collect();
                format!("unknown suite {s:?}; expected all or one of {}", names.join(", "))
            })
    }
}

/// A witness for a failed check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub q: u32,
    pub torus: Option<TorusKind>,
    pub theta: Option<CharIndex>,
    pub detail: String,
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub q: u32,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub max_deviation: f64,
}

impl SuiteResult {
    fn new(suite: Suite, q: u32) -> Self {
        SuiteResult {
            name: suite.name().to_string(),
            q,
            checks: 0,
            failures: Vec::new(),
            max_deviation: 0.0,
        }
    }

    /// Records a deviation check against [`TOLERANCE`].
    fn deviation(&mut self, torus: Option<TorusKind>, theta: Option<CharIndex>, dev: f64, what: &str) {
        self.checks += 1;
        self.max_deviation = self.max_deviation.max(dev);
        if dev.is_nan() || dev >= TOLERANCE {
            self.failures.push(Failure {
                q: self.q,
                torus,
                theta,
                detail: what.to_string(),
                deviation: Some(dev),
            });
        }
    }

    fn check(&mut self, torus: Option<TorusKind>, theta: Option<CharIndex>, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                q: self.q,
                torus,
                theta,
                detail: what(),
                deviation: None,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub qs: Vec<u32>,
    pub suites: Vec<SuiteResult>,
    pub total_checks: usize,
    pub total_failures: usize,
    pub passed: bool,
}

impl VerificationSummary {
    pub fn failures(&self) -> impl Iterator<Item = (&str, &Failure)> {
        self.suites
            .iter()
            .flat_map(|s| s.failures.iter().map(move |f| (s.name.as_str(), f)))
    }
}

/// Runs `suite` (or every suite for [`Suite::All`]) at each `q`.
pub fn run_suite(lab: &Lab, suite: Suite, qs: &[u32]) -> Result<VerificationSummary> {
    for &q in qs {
        lab.tower(q)?;
    }
    let jobs: Vec<(Suite, u32)> = suite
        .expand()
        .into_iter()
        .flat_map(|s| qs.iter().map(move |&q| (s, q)))
        .collect();
    let suites = jobs
        .par_iter()
        .map(|&(s, q)| run_one(lab, s, q))
        .collect::<Result<Vec<_>>>()?;
    let total_checks = suites.iter().map(|s| s.checks).sum();
    let total_failures = suites.iter().map(|s| s.failures.len()).sum();
    Ok(VerificationSummary {
        qs: qs.to_vec(),
        suites,
        total_checks,
        total_failures,
        passed: total_failures == 0,
    })
}

fn run_one(lab: &Lab, suite: Suite, q: u32) -> Result<SuiteResult> {
    log::debug!("suite {suite} at q={q}");
    let mut r = SuiteResult::new(suite, q);
    match suite {
        Suite::Restriction => restriction(lab, &mut r)?,
        Suite::SplitOracle => split_oracle(lab, &mut r)?,
        Suite::Orthogonality => orthogonality(lab, &mut r)?,
        Suite::Degrees => degrees(lab, &mut r)?,
        Suite::Clifford => clifford(lab, &mut r)?,
        Suite::Regularity => regularity(lab, &mut r)?,
        Suite::Coset => coset(lab, &mut r)?,
        Suite::Iso => iso(lab, &mut r)?,
        Suite::Green => green(lab, &mut r)?,
        Suite::All => unreachable!("expanded by run_suite"),
    }
    Ok(r)
}

/// Distinct `GL2`-level character indices of the standard torus of `kind`.
fn indices(lab: &Lab, q: u32, kind: TorusKind) -> Result<Vec<CharIndex>> {
    Ok(lab
        .torus(q, q - 1, kind)?
        .characters()
        .iter()
        .map(|c| c.index())
        .collect())
}

fn all_indices(lab: &Lab, q: u32) -> Result<Vec<CharIndex>> {
    let mut out = indices(lab, q, TorusKind::Split)?;
    out.extend(indices(lab, q, TorusKind::Nonsplit)?);
    Ok(out)
}

fn restriction(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    let q = r.q;
    let devs = all_indices(lab, q)?
        .into_par_iter()
        .map(|i| Ok((i, verify_restriction_theorem(lab, q, i)?)))
        .collect::<Result<Vec<_>>>()?;
    for (i, dev) in devs {
        r.deviation(Some(i.kind()), Some(i), dev, "Res R^GL2 differs from R^SL2");
    }
    Ok(())
}

fn split_oracle(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    let q = r.q;
    let g = lab.gl2(q)?;
    let b = lab.borel(q)?;
    let devs = indices(lab, q, TorusKind::Split)?
        .into_par_iter()
        .map(|i| {
            let CharIndex::Split(j1, j2) = i else { unreachable!() };
            let dl = lab.gl2_character(q, i)?;
            Ok((i, dl.max_deviation(&principal_series(&g, &b, j1, j2)?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, dev) in devs {
        r.deviation(Some(TorusKind::Split), Some(i), dev, "R_{T_s} differs from Ind_B");
    }
    Ok(())
}

/// Expected `<R_{T,theta}, R_{T',theta'}>` from index arithmetic alone.
fn weyl_count(q: u32, a: CharIndex, b: CharIndex) -> i64 {
    let same = |x: CharIndex, y: CharIndex| match (x, y) {
        (CharIndex::Split(a1, a2), CharIndex::Split(b1, b2)) => {
            a1 % (q - 1) == b1 % (q - 1) && a2 % (q - 1) == b2 % (q - 1)
        }
        (CharIndex::Nonsplit(x), CharIndex::Nonsplit(y)) => x % (q * q - 1) == y % (q * q - 1),
        _ => false,
    };
    if a.kind() != b.kind() {
        0
    } else if same(a, b) {
        if same(a, a.weyl_twist(q)) {
            2
        } else {
            1
        }
    } else if same(a.weyl_twist(q), b) {
        1
    } else {
        0
    }
}

fn orthogonality(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    let q = r.q;
    let idx = all_indices(lab, q)?;
    let chars = idx
        .par_iter()
        .map(|&i| lab.gl2_character(q, i))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..idx.len())
        .flat_map(|a| (0..idx.len()).map(move |b| (a, b)))
        .collect();
    let got = pairs
        .par_iter()
        .map(|&(a, b)| chars[a].inner_product(&chars[b]))
        .collect::<Result<Vec<_>>>()?;
    for (&(a, b), ip) in pairs.iter().zip(got) {
        let expected = weyl_count(q, idx[a], idx[b]);
        let dev = (ip - num_complex::Complex64::new(expected as f64, 0.0)).norm();
        r.deviation(
            Some(idx[a].kind()),
            Some(idx[a]),
            dev,
            &format!("<R, R'> with theta'={} ({}) expected {expected}", idx[b], idx[b].kind()),
        );
    }
    Ok(())
}

fn degrees(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    let q = r.q as i64;
    for i in all_indices(lab, r.q)? {
        let expected = match i.kind() {
            TorusKind::Split => q + 1,
            TorusKind::Nonsplit => 1 - q,
        };
        let deg = lab.gl2_character(r.q, i)?.degree();
        let got = nearest_integer(deg);
        r.check(Some(i.kind()), Some(i), got == Ok(expected), || {
            format!("R(1) = {deg}, expected {expected}")
        });
    }
    Ok(())
}

fn clifford(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    let q = r.q;
    let census = restriction_census(lab, q)?;
    r.check(None, None, census.matches_index_census, || {
        format!(
            "census found {} orbits / {} split, index arithmetic gives {} / {}",
            census.cuspidal_orbits, census.two_components, census.index_census.orbits, census.index_census.split
        )
    });
    r.check(None, None, census.dimension_accounting_ok, || {
        "dim chi != m * t * dim rho' for some cuspidal".to_string()
    });

    let divisors: Vec<u32> = (1..q).filter(|d| (q - 1) % d == 0).collect();
    let irr = gl2_irreducibles(lab, q)?;
    let subgroups = divisors
        .iter()
        .map(|&d| lab.group(q, GroupKind::DetSubgroup { d_order: d }))
        .collect::<Result<Vec<_>>>()?;
    let work: Vec<(usize, usize)> = (0..irr.len())
        .flat_map(|a| (0..subgroups.len()).map(move |b| (a, b)))
        .collect();
    let reports = work
        .par_iter()
        .map(|&(a, b)| clifford_analyze(&irr[a].character, &subgroups[b], &irr[a].label))
        .collect::<Result<Vec<_>>>()?;
    for rep in reports {
        let square = match (rep.multiplicity, rep.component_count) {
            (Some(m), Some(t)) => (m * m * t) as i64 == rep.restriction_norm,
            _ => false,
        };
        r.check(None, None, rep.clifford_consistent && square, || {
            format!(
                "{} on |D|={}: n={} s={} candidates={:?}",
                rep.character, rep.d_order, rep.restriction_norm, rep.twist_stabilizer_size, rep.candidates
            )
        });
    }
    Ok(())
}

fn regularity(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    let census = restriction_census(lab, r.q)?;
    for rep in &census.reports {
        r.check(rep.torus, rep.theta, rep.prediction_matched == Some(true), || {
            format!(
                "predicted single component = {:?}, observed (m, t) = ({:?}, {:?})",
                rep.regular_in_g, rep.multiplicity, rep.component_count
            )
        });
        r.check(rep.torus, rep.theta, rep.multiplicity == Some(1), || {
            format!("multiplicity {:?}", rep.multiplicity)
        });
    }
    Ok(())
}

fn coset(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    for kind in KINDS {
        let (g, formula, products) = coset_identity(lab, r.q, kind)?;
        r.check(Some(kind), None, g == formula, || {
            format!("|GL2| = {g} but |SL2||T|/|T_H| = {formula}")
        });
        r.check(Some(kind), None, g == products, || {
            format!("|GL2| = {g} but |SL2 T| = {products}")
        });
    }
    Ok(())
}

fn iso(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    let q = r.q;
    let g = lab.gl2(q)?;
    for (k, kind) in KINDS.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED ^ ((q as u64) << 8) ^ k as u64);
        let idx = indices(lab, q, kind)?;
        let samples: Vec<_> = (0..ISO_SAMPLES)
            .map(|_| {
                let x = g.elements()[rng.gen_range(0..g.order())];
                (x, idx[rng.gen_range(0..idx.len())])
            })
            .collect();
        let devs = samples
            .par_iter()
            .map(|(x, i)| verify_iso_invariance(lab, q, *i, x))
            .collect::<Result<Vec<_>>>()?;
        for ((x, i), dev) in samples.iter().zip(devs) {
            r.deviation(Some(kind), Some(*i), dev, &format!("conjugation by {x}"));
        }
    }
    Ok(())
}

fn green(lab: &Lab, r: &mut SuiteResult) -> Result<()> {
    let q = r.q;
    for d in [q - 1, 1] {
        let kind = GroupKind::DetSubgroup { d_order: d };
        let g = lab.group(q, kind)?;
        let table = lab.green(q, kind)?;
        let again = GreenTable::from_entries(&g, table.entries());
        r.check(None, None, again.is_ok(), || {
            format!("{} table fails revalidation: {:?}", g.label(), again.err())
        });
        if !g.is_gl2() && !g.is_sl2() {
            continue;
        }
        let one = g.class_index_of(&g.tower().identity()).ok_or(Error::NotAMember("1".into()))?;
        for (c, class) in g.classes().iter().enumerate() {
            if !g.is_unipotent(class.representative()) {
                continue;
            }
            for t in KINDS {
                let expected = match (c == one, t) {
                    (true, TorusKind::Split) => q as i64 + 1,
                    (true, TorusKind::Nonsplit) => 1 - q as i64,
                    (false, _) => 1,
                };
                let got = table.whole(t, c);
                r.check(Some(t), None, got == Some(expected), || {
                    format!("{}: Q_T({}) = {got:?}, expected {expected}", g.label(), class.representative())
                });
            }
        }
    }
    Ok(())
}
