//! Periodic points and repetitiveness.
//!
//! A candidate is a letter a on a cycle of c ↦ first letter of φ(c), with ℓ
//! the cycle length and |φ^ℓ(a)| ≥ 2, so (φ^ℓ)^∞(a) is an infinite fixed
//! point. It is periodic iff φ^ℓ(w) = wᵏ for its minimal period w, and then
//! Parikh(w) is a positive eigenvector of the incidence matrix of φ^ℓ on the
//! letters reachable from a, with eigenvalue k. That gives two cheap
//! refutations (a letter with boundedly many occurrences, or a Perron root
//! that is not an integer ≥ 2) before the prefix scan, which is complete for
//! periods up to half the scanned prefix.

use serde_json::{json, Map, Value};

use crate::algebraic::{charpoly, RealRoot};
use crate::codes::{injective_simplification, is_injective, InjectiveSimplification};
use crate::error::{Error, Result};
use crate::growth::{bounded_mask, pushy_witness, PushyWitness, Side};
use crate::system::{D0LSystem, Morphism, DEFAULT_LENGTH_BUDGET};
use crate::word::{minimal_period, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub letter: Letter,
    pub ell: usize,
}

/// Candidates in letter order.
pub fn candidates(m: &Morphism) -> Result<Vec<Candidate>> {
    m.require_propagating()?;
    let first = |c: Letter| m.image(c)[0];
    let mut out = Vec::new();
    for a in m.alphabet().letters() {
        let mut cur = first(a);
        let mut ell = 1;
        while cur != a && ell <= m.size() {
            cur = first(cur);
            ell += 1;
        }
        if cur != a {
            continue;
        }
        let long = m.image_lengths(ell).is_none_or(|l| l[a.index()] >= 2);
        if long {
            out.push(Candidate { letter: a, ell });
        }
    }
    Ok(out)
}

/// (φ^ℓ)^∞(a) = w^ω with φ^ℓ(w) = wᵏ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPointCertificate {
    pub letter: Letter,
    pub ell: usize,
    pub period: Word,
    pub power: usize,
}

impl PeriodicPointCertificate {
    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        json!({
            "letter": sys.alphabet().name(self.letter),
            "ell": self.ell,
            "period": sys.render(&self.period),
            "power": self.power,
        })
    }
}

#[derive(Debug, Clone)]
pub enum Refutation {
    /// This letter occurs in the fixed point, but only finitely often.
    BoundedOccurrence(Letter),
    /// Perron root of the reachable part of M^ℓ, not an integer ≥ 2.
    Eigenvalue(RealRoot),
}

impl Refutation {
    fn to_json(&self, sys: &D0LSystem) -> Value {
        match self {
            Refutation::BoundedOccurrence(c) => json!({
                "reason": "bounded_occurrence",
                "letter": sys.alphabet().name(*c),
            }),
            Refutation::Eigenvalue(r) => json!({
                "reason": "eigenvalue",
                "value": r.decimal(9),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub enum CandidateOutcome {
    Periodic(PeriodicPointCertificate),
    Aperiodic(Refutation),
    /// No period ≤ `prefix_len / 2`; `prefix_period` is the minimal period of
    /// the scanned prefix.
    Inconclusive { prefix_len: usize, prefix_period: usize },
}

fn reach_closure(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut r: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || adj[i][j]).collect()).collect();
    for k in 0..n {
        let via = r[k].clone();
        for row in r.iter_mut().filter(|row| row[k]) {
            for (x, &y) in row.iter_mut().zip(&via) {
                *x |= y;
            }
        }
    }
    r
}

/// The fast refutations for candidate `a` with ψ = φ^ℓ given by `mat`.
fn refute(mat: &[Vec<u64>], a: usize) -> Option<Refutation> {
    let n = mat.len();
    let adj: Vec<Vec<bool>> = mat.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
    let reach = reach_closure(&adj);
    let cyclic: Vec<bool> = (0..n).map(|d| (0..n).any(|e| adj[d][e] && reach[e][d])).collect();
    let region: Vec<usize> = (0..n).filter(|&c| reach[a][c]).collect();

    for &c in &region {
        let grows = region.iter().any(|&d| {
            cyclic[d]
                && reach[d][c]
                && (0..n).filter(|&e| reach[e][c]).map(|e| mat[d][e]).sum::<u64>() >= 2
        });
        if !grows {
            return Some(Refutation::BoundedOccurrence(Letter(c as u32)));
        }
    }

    let rows: Vec<Vec<u64>> = region.iter().map(|&i| region.iter().map(|&j| mat[i][j]).collect()).collect();
    let root = RealRoot::largest(&charpoly(&rows))?;
    let integral = root.as_integer().is_some_and(|k| k >= 2.into());
    (!integral).then_some(Refutation::Eigenvalue(root))
}

/// Prefix of length `n` of φ(w).
fn apply_truncated(m: &Morphism, w: &[Letter], n: usize) -> Vec<Letter> {
    let mut out = Vec::with_capacity(n);
    for &a in w {
        if out.len() >= n {
            break;
        }
        out.extend_from_slice(m.image(a));
    }
    out.truncate(n);
    out
}

/// Prefix of length `n` of (φ^ℓ)^∞(a).
pub fn fixed_point_prefix(m: &Morphism, c: Candidate, n: usize) -> Vec<Letter> {
    let mut x = vec![c.letter];
    while x.len() < n {
        let mut y = x.clone();
        for _ in 0..c.ell {
            y = apply_truncated(m, &y, n);
        }
        if y.len() <= x.len() {
            break;
        }
        x = y;
    }
    x
}

/// Forced-candidate scan: the minimal period p of the length-`prefix_cap`
/// prefix is the only possible period ≤ `prefix_cap / 2`.
pub fn scan_candidate(m: &Morphism, c: Candidate, prefix_cap: usize) -> Result<CandidateOutcome> {
    let x = fixed_point_prefix(m, c, prefix_cap);
    let p = minimal_period(&x);
    if 2 * p <= x.len() {
        let w = Word::from(&x[..p]);
        let img = m.iterate_with_budget(&w, c.ell, DEFAULT_LENGTH_BUDGET.max(prefix_cap))?;
        let k = img.len() / p;
        if img.len() % p == 0 && k >= 2 && img == w.pow(k) {
            return Ok(CandidateOutcome::Periodic(PeriodicPointCertificate {
                letter: c.letter,
                ell: c.ell,
                period: w,
                power: k,
            }));
        }
    }
    Ok(CandidateOutcome::Inconclusive {
        prefix_len: x.len(),
        prefix_period: p,
    })
}

/// Full analysis of one candidate: fast refutations, then the scan.
pub fn analyze_candidate(m: &Morphism, c: Candidate, prefix_cap: usize) -> Result<CandidateOutcome> {
    if let Some(mat) = m.incidence_matrix().checked_pow(c.ell) {
        if let Some(r) = refute(&mat.rows(), c.letter.index()) {
            return Ok(CandidateOutcome::Aperiodic(r));
        }
    }
    scan_candidate(m, c, prefix_cap)
}

#[derive(Debug, Clone)]
pub enum PeriodicityStatus {
    Periodic(PeriodicPointCertificate),
    /// Every candidate refuted (vacuous when there are none).
    Aperiodic,
    Inconclusive { prefix_cap: usize },
}

#[derive(Debug, Clone)]
pub struct PeriodicityVerdict {
    pub status: PeriodicityStatus,
    pub outcomes: Vec<(Candidate, CandidateOutcome)>,
}

impl PeriodicityVerdict {
    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        let status = match &self.status {
            PeriodicityStatus::Periodic(c) => json!({"status": "periodic", "certificate": c.to_json(sys)}),
            PeriodicityStatus::Aperiodic => json!({"status": "aperiodic"}),
            PeriodicityStatus::Inconclusive { prefix_cap } => {
                json!({"status": "inconclusive", "cap": prefix_cap})
            }
        };
        let mut out = status.as_object().cloned().unwrap_or_default();
        out.insert(
            "candidates".into(),
            Value::Array(self.outcomes.iter().map(|(c, o)| outcome_json(sys, c, o)).collect()),
        );
        Value::Object(out)
    }
}

fn outcome_json(sys: &D0LSystem, c: &Candidate, o: &CandidateOutcome) -> Value {
    let mut out = Map::new();
    out.insert("letter".into(), json!(sys.alphabet().name(c.letter)));
    out.insert("ell".into(), json!(c.ell));
    match o {
        CandidateOutcome::Periodic(cert) => {
            out.insert("outcome".into(), json!("periodic"));
            out.insert("certificate".into(), cert.to_json(sys));
        }
        CandidateOutcome::Aperiodic(r) => {
            out.insert("outcome".into(), json!("aperiodic"));
            out.insert("refutation".into(), r.to_json(sys));
        }
        CandidateOutcome::Inconclusive { prefix_len, prefix_period } => {
            out.insert("outcome".into(), json!("inconclusive"));
            out.insert("prefix_len".into(), json!(prefix_len));
            out.insert("prefix_period".into(), json!(prefix_period));
        }
    }
    Value::Object(out)
}

/// Periodic-point analysis of an injective system.
pub fn periodic_point_certificate(sys: &D0LSystem, prefix_cap: usize) -> Result<PeriodicityVerdict> {
    let m = sys.morphism();
    m.require_propagating()?;
    if !is_injective(m)? {
        return Err(Error::NonInjective);
    }
    let mut outcomes = Vec::new();
    for c in candidates(m)? {
        outcomes.push((c, analyze_candidate(m, c, prefix_cap)?));
    }
    let status = if let Some(cert) = outcomes.iter().find_map(|(_, o)| match o {
        CandidateOutcome::Periodic(cert) => Some(cert.clone()),
        _ => None,
    }) {
        PeriodicityStatus::Periodic(cert)
    } else if outcomes.iter().all(|(_, o)| matches!(o, CandidateOutcome::Aperiodic(_))) {
        PeriodicityStatus::Aperiodic
    } else {
        PeriodicityStatus::Inconclusive { prefix_cap }
    };
    Ok(PeriodicityVerdict { status, outcomes })
}

#[derive(Debug, Clone)]
pub enum UrStatus {
    /// The certificate lives in the simplified system; `lifted_period` is its
    /// period mapped back, with φ^ℓ(lifted) = liftedᵏ checked directly.
    Yes {
        certificate: PeriodicPointCertificate,
        lifted_period: Word,
    },
    NoUpToCap { prefix_cap: usize },
    NoCertified,
}

#[derive(Debug, Clone)]
pub struct UrReport {
    pub status: UrStatus,
    pub simplification: InjectiveSimplification,
    pub periodicity: PeriodicityVerdict,
    pub prefix_cap: usize,
}

impl UrReport {
    pub fn is_yes(&self) -> bool {
        matches!(self.status, UrStatus::Yes { .. })
    }

    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        let simplified = &self.simplification.final_system;
        let mut out = Map::new();
        match &self.status {
            UrStatus::Yes { certificate, lifted_period } => {
                out.insert("unboundedly_repetitive".into(), json!("yes"));
                out.insert("certificate".into(), certificate.to_json(simplified));
                out.insert("lifted_period".into(), json!(sys.render(lifted_period)));
            }
            UrStatus::NoUpToCap { .. } => {
                out.insert("unboundedly_repetitive".into(), json!("no_cap"));
            }
            UrStatus::NoCertified => {
                out.insert("unboundedly_repetitive".into(), json!("no"));
            }
        }
        out.insert("cap".into(), json!(self.prefix_cap));
        out.insert("simplified_system".into(), json!(simplified.to_text()));
        out.insert("periodicity".into(), self.periodicity.to_json(simplified));
        Value::Object(out)
    }

}

pub fn is_unboundedly_repetitive(sys: &D0LSystem, prefix_cap: usize) -> Result<UrReport> {
    let mask = bounded_mask(sys.morphism())?;
    let simplification = injective_simplification(sys)?;
    let periodicity = periodic_point_certificate(&simplification.final_system, prefix_cap)?;
    let mut status = None;
    let mut rejected = false;
    for (_, outcome) in &periodicity.outcomes {
        let CandidateOutcome::Periodic(cert) = outcome else { continue };
        let lifted = simplification.lift.apply(&cert.period);
        let img = sys
            .morphism()
            .iterate_with_budget(&lifted, cert.ell, DEFAULT_LENGTH_BUDGET.max(prefix_cap))?;
        if img != lifted.pow(cert.power) {
            return Err(Error::Invariant("lifted period is not a periodic point".into()));
        }
        if lifted.iter().any(|a| !mask[a.index()]) {
            status = Some(UrStatus::Yes {
                certificate: cert.clone(),
                lifted_period: lifted,
            });
            break;
        }
        rejected = true;
    }
    let status = status.unwrap_or(match periodicity.status {
        PeriodicityStatus::Aperiodic if !rejected => UrStatus::NoCertified,
        _ => UrStatus::NoUpToCap { prefix_cap },
    });
    Ok(UrReport {
        status,
        simplification,
        periodicity,
        prefix_cap,
    })
}

#[derive(Debug, Clone)]
pub enum RepetitiveStatus {
    Pushy(PushyWitness),
    UnboundedlyRepetitive { lifted_period: Word },
    NoUpToCap { prefix_cap: usize },
    NoCertified,
}

#[derive(Debug, Clone)]
pub struct RepetitiveVerdict {
    pub status: RepetitiveStatus,
    /// Absent when pushiness already settles the question.
    pub ur: Option<UrReport>,
    pub prefix_cap: usize,
}

impl RepetitiveVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(
            self.status,
            RepetitiveStatus::Pushy(_) | RepetitiveStatus::UnboundedlyRepetitive { .. }
        )
    }

    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        let mut out = Map::new();
        match &self.status {
            RepetitiveStatus::Pushy(w) => {
                out.insert("repetitive".into(), json!("yes"));
                out.insert("kind".into(), json!("pushy"));
                out.insert("witness".into(), pushy_json(sys, w));
            }
            RepetitiveStatus::UnboundedlyRepetitive { lifted_period } => {
                out.insert("repetitive".into(), json!("yes"));
                out.insert("kind".into(), json!("unboundedly_repetitive"));
                out.insert("witness".into(), json!({"period": sys.render(lifted_period)}));
            }
            RepetitiveStatus::NoUpToCap { .. } => {
                out.insert("repetitive".into(), json!("no_cap"));
            }
            RepetitiveStatus::NoCertified => {
                out.insert("repetitive".into(), json!("no"));
            }
        }
        out.insert("cap".into(), json!(self.prefix_cap));
        if let Some(ur) = &self.ur {
            out.insert("unboundedly_repetitive".into(), ur.to_json(sys));
        }
        Value::Object(out)
    }
}

pub fn pushy_json(sys: &D0LSystem, w: &PushyWitness) -> Value {
    json!({
        "side": match w.side { Side::Left => "left", Side::Right => "right" },
        "cycle": w.cycle.iter().map(|&a| sys.alphabet().name(a)).collect::<Vec<_>>(),
        "carrier": sys.alphabet().name(w.carrier),
        "material": sys.render(&w.material),
    })
}

pub fn is_repetitive(sys: &D0LSystem, prefix_cap: usize) -> Result<RepetitiveVerdict> {
    if let Some(w) = pushy_witness(sys)? {
        return Ok(RepetitiveVerdict {
            status: RepetitiveStatus::Pushy(w),
            ur: None,
            prefix_cap,
        });
    }
    let ur = is_unboundedly_repetitive(sys, prefix_cap)?;
    let status = match &ur.status {
        UrStatus::Yes { lifted_period, .. } => RepetitiveStatus::UnboundedlyRepetitive {
            lifted_period: lifted_period.clone(),
        },
        UrStatus::NoUpToCap { prefix_cap } => RepetitiveStatus::NoUpToCap { prefix_cap: *prefix_cap },
        UrStatus::NoCertified => RepetitiveStatus::NoCertified,
    };
    Ok(RepetitiveVerdict {
        status,
        ur: Some(ur),
        prefix_cap,
    })
}
