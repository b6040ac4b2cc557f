//! Interpretations, synchronizing points and the circularity decision.
//!
//! An interpretation of u is a triple (p, v, s) with φ(v) = p·u·s, kept
//! trimmed (|p| < |φ(v₁)|, |s| < |φ(vₙ)|) and with v drawn from the corpus.
//! Its cut set holds the positions k of u with φ(v₁…v_j) = p·u₁…u_k for some
//! j ≥ 0.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::codes::{injectivity, InjectivityReport, SystemInjectivity};
use crate::corpus::FactorCorpus;
use crate::error::{Error, Result};
use crate::periodicity::{is_unboundedly_repetitive, PeriodicPointCertificate, UrReport, UrStatus};
use crate::system::{D0LSystem, Morphism, DEFAULT_LENGTH_BUDGET};
use crate::word::{Letter, Word};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub prefix: Word,
    pub preimage: Word,
    pub suffix: Word,
    /// |φ(v₁…v_j)| for j = 0..=n.
    pub boundaries: Vec<usize>,
    pub cuts: Vec<usize>,
}

impl Interpretation {
    /// Builds (p, v, s) for a word of length `u_len` from the images under
    /// `m`; the caller guarantees φ(v) = p·u·s.
    pub fn new(m: &Morphism, prefix: Word, preimage: Word, suffix: Word, u_len: usize) -> Self {
        let mut boundaries = vec![0];
        for &a in preimage.iter() {
            boundaries.push(boundaries.last().unwrap() + m.image(a).len());
        }
        let cuts = boundaries
            .iter()
            .filter_map(|&b| b.checked_sub(prefix.len()))
            .filter(|&k| k <= u_len)
            .collect();
        Interpretation {
            prefix,
            preimage,
            suffix,
            boundaries,
            cuts,
        }
    }

    /// Start offset of vᵢ (1-based) relative to u.
    fn start(&self, i: usize) -> i64 {
        self.boundaries[i - 1] as i64 - self.prefix.len() as i64
    }

    /// min(|φ(v₁…vᵢ)| − |p|, |φ(vᵢ₊₁…vₙ)| − |s|).
    fn flank(&self, i: usize) -> i64 {
        let n = self.preimage.len();
        let left = self.boundaries[i] as i64 - self.prefix.len() as i64;
        let right = (self.boundaries[n] - self.boundaries[i]) as i64 - self.suffix.len() as i64;
        left.min(right)
    }

    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        json!({
            "prefix": sys.render(&self.prefix),
            "preimage": sys.render(&self.preimage),
            "suffix": sys.render(&self.suffix),
            "cuts": self.cuts,
        })
    }
}

/// Largest flank of a position of `a` whose letter is not matched by a
/// letter of `b` at the same start offset; 0 when every position matches.
pub fn def2_depth(a: &Interpretation, b: &Interpretation) -> usize {
    let mut depth = 0i64;
    for i in 1..=a.preimage.len() {
        let start = a.start(i);
        let matched = (1..=b.preimage.len()).any(|j| b.start(j) == start && b.preimage[j - 1] == a.preimage[i - 1]);
        if !matched {
            depth = depth.max(a.flank(i));
        }
    }
    depth.max(0) as usize
}

/// All trimmed interpretations of `u` with preimage in the corpus, ordered
/// by (|v|, v, |p|).
pub fn interpretations_of(u: &[Letter], corpus: &FactorCorpus) -> Result<Vec<Interpretation>> {
    let sys = corpus.system();
    if u.is_empty() || !corpus.contains(u) {
        return Err(Error::NotInCorpus(sys.render(u)));
    }
    let m = sys.morphism();
    let mut out = Vec::new();
    for a in sys.alphabet().letters() {
        if !corpus.contains(&[a]) {
            continue;
        }
        let img = m.image(a);
        for p in 0..img.len() {
            let mut v = vec![a];
            extend(m, corpus, u, &img[..p], &img[p..], 0, &mut v, &mut out);
        }
    }
    out.sort_by(|x, y| {
        (x.preimage.len(), &x.preimage, x.prefix.len()).cmp(&(y.preimage.len(), &y.preimage, y.prefix.len()))
    });
    Ok(out)
}

/// `covered` letters of u are matched; `tail` is the part of the image of
/// the last letter of `v` still to be matched.
#[allow(clippy::too_many_arguments)]
fn extend(
    m: &Morphism,
    corpus: &FactorCorpus,
    u: &[Letter],
    prefix: &[Letter],
    tail: &[Letter],
    covered: usize,
    v: &mut Vec<Letter>,
    out: &mut Vec<Interpretation>,
) {
    let need = u.len() - covered;
    let take = need.min(tail.len());
    if tail[..take] != u[covered..covered + take] {
        return;
    }
    if take == need {
        out.push(Interpretation::new(
            m,
            Word::from(prefix),
            Word::from(v.clone()),
            Word::from(&tail[take..]),
            u.len(),
        ));
        return;
    }
    for b in m.alphabet().letters() {
        v.push(b);
        if corpus.contains(v) {
            extend(m, corpus, u, prefix, m.image(b), covered + take, v, out);
        }
        v.pop();
    }
}

#[derive(Debug, Clone)]
pub struct SyncReport {
    pub word: Word,
    pub interpretations: Vec<Interpretation>,
    /// Intersection of all cut sets.
    pub sync_positions: Vec<usize>,
}

impl SyncReport {
    /// Largest [`def2_depth`] over ordered pairs of interpretations.
    pub fn def2_depth(&self) -> usize {
        let mut depth = 0;
        for (i, a) in self.interpretations.iter().enumerate() {
            for (j, b) in self.interpretations.iter().enumerate() {
                if i != j {
                    depth = depth.max(def2_depth(a, b));
                }
            }
        }
        depth
    }

    /// Ordered pairs (i, j) violating letter-aligned synchronization at
    /// delay `d`.
    pub fn def2_violations(&self, d: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.interpretations.iter().enumerate() {
            for (j, b) in self.interpretations.iter().enumerate() {
                if i != j && def2_depth(a, b) > d {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        json!({
            "word": sys.render(&self.word),
            "interpretations": self.interpretations.iter().map(|i| i.to_json(sys)).collect::<Vec<_>>(),
            "sync_positions": self.sync_positions,
            "def2_depth": self.def2_depth(),
        })
    }
}

pub fn sync_report(u: &[Letter], corpus: &FactorCorpus) -> Result<SyncReport> {
    let interpretations = interpretations_of(u, corpus)?;
    let mut sync: BTreeSet<usize> = (0..=u.len()).collect();
    for i in &interpretations {
        let cuts: BTreeSet<usize> = i.cuts.iter().copied().collect();
        sync = sync.intersection(&cuts).copied().collect();
    }
    Ok(SyncReport {
        word: Word::from(u),
        interpretations,
        sync_positions: sync.into_iter().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayMode {
    /// Some common cut in every long factor.
    Weak,
    /// Letter-aligned agreement of all interpretations away from the ends.
    Strong,
}

impl DelayMode {
    pub fn name(self) -> &'static str {
        match self {
            DelayMode::Weak => "weak",
            DelayMode::Strong => "strong",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DelayOutcome {
    Delay(usize),
    /// The estimate does not settle within the corpus.
    Failure { witness: Word },
}

/// Delay estimates over factors up to the corpus bound and up to half of it;
/// the estimate fails when they differ (or, in weak mode, when no factor
/// longer than the estimate is left to test).
#[derive(Debug, Clone)]
pub struct DelayEstimate {
    pub mode: DelayMode,
    pub outcome: DelayOutcome,
    pub full: usize,
    pub half: usize,
    pub corpus_len: usize,
    pub generation: usize,
    pub stable: bool,
}

impl DelayEstimate {
    pub fn delay(&self) -> Option<usize> {
        match self.outcome {
            DelayOutcome::Delay(d) => Some(d),
            DelayOutcome::Failure { .. } => None,
        }
    }

    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        let mut out = Map::new();
        out.insert("mode".into(), json!(self.mode.name()));
        match &self.outcome {
            DelayOutcome::Delay(d) => {
                out.insert("status".into(), json!("delay"));
                out.insert("delay".into(), json!(d));
            }
            DelayOutcome::Failure { witness } => {
                out.insert("status".into(), json!("failure"));
                out.insert("witness".into(), json!(sys.render(witness)));
            }
        }
        out.insert("estimate_full".into(), json!(self.full));
        out.insert("estimate_half".into(), json!(self.half));
        out.insert(
            "caps".into(),
            json!({"corpus": self.corpus_len, "generations": self.generation, "stable": self.stable}),
        );
        Value::Object(out)
    }
}

pub fn estimate_sync_delay(sys: &D0LSystem, limits: &Limits, mode: DelayMode) -> Result<DelayEstimate> {
    let corpus = FactorCorpus::build(sys, limits.corpus_len, limits.generations)?;
    estimate_sync_delay_in(&corpus, mode)
}

pub fn estimate_sync_delay_in(corpus: &FactorCorpus, mode: DelayMode) -> Result<DelayEstimate> {
    let n = corpus.max_len();
    // (factor, badness): badness is the length for an unsynchronized factor
    // in weak mode and the depth in strong mode
    let mut scored: Vec<(&Word, usize)> = Vec::new();
    for f in corpus.iter() {
        let report = sync_report(f, corpus)?;
        let score = match mode {
            DelayMode::Weak => {
                if report.sync_positions.is_empty() {
                    f.len()
                } else {
                    0
                }
            }
            DelayMode::Strong => report.def2_depth(),
        };
        scored.push((f, score));
    }
    let estimate = |bound: usize| -> usize {
        let worst = scored.iter().filter(|(f, _)| f.len() <= bound).map(|&(_, s)| s).max().unwrap_or(0);
        match mode {
            DelayMode::Weak => worst.div_ceil(2).max(1),
            DelayMode::Strong => worst.max(1),
        }
    };
    let full = estimate(n);
    let half = estimate(n / 2);
    let fails = full > half || (mode == DelayMode::Weak && 2 * full >= n);
    let outcome = if fails {
        let threshold = match mode {
            DelayMode::Weak => 0,
            DelayMode::Strong => half,
        };
        let witness = scored
            .iter()
            .filter(|&&(_, s)| s > threshold)
            .max_by_key(|(f, _)| (f.len(), std::cmp::Reverse(*f)))
            .map(|(f, _)| (*f).clone())
            .unwrap_or_default();
        DelayOutcome::Failure { witness }
    } else {
        DelayOutcome::Delay(full)
    };
    Ok(DelayEstimate {
        mode,
        outcome,
        full,
        half,
        corpus_len: n,
        generation: corpus.generation(),
        stable: corpus.is_stable(),
    })
}

/// The pair of interpretations of w^{2k} under φ^ℓ built from a periodic
/// point: (ε, w², ε) and (w, w³, w^{k−1}).
#[derive(Debug, Clone)]
pub struct RepetitionFamily {
    pub word: Word,
    pub first: Interpretation,
    pub second: Interpretation,
}

#[derive(Debug, Clone)]
pub struct CollisionStep {
    pub threshold: usize,
    pub u: Word,
    pub v: Word,
    pub image: Word,
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub enum NotCircularWitness {
    Repetition {
        certificate: PeriodicPointCertificate,
        lifted_period: Word,
        family: Box<RepetitionFamily>,
    },
    Collisions(Vec<CollisionStep>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircularMode {
    Certified,
    BoundConditional,
}

#[derive(Debug, Clone)]
pub enum CircularityStatus {
    Circular(CircularMode),
    NotCircular(NotCircularWitness),
    Unknown(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct CircularityVerdict {
    pub status: CircularityStatus,
    pub injectivity: InjectivityReport,
    pub ur: Option<UrReport>,
    pub weak_delay: Option<DelayEstimate>,
    pub limits: Limits,
    pub corpus_generation: usize,
    pub corpus_stable: bool,
}

impl CircularityVerdict {
    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        let mut out = Map::new();
        match &self.status {
            CircularityStatus::Circular(mode) => {
                out.insert("status".into(), json!("circular"));
                let mode = match mode {
                    CircularMode::Certified => "certified",
                    CircularMode::BoundConditional => "bound_conditional",
                };
                out.insert("mode".into(), json!(mode));
            }
            CircularityStatus::NotCircular(w) => {
                out.insert("status".into(), json!("not_circular"));
                out.insert("witness".into(), witness_json(sys, self.ur.as_ref(), w));
            }
            CircularityStatus::Unknown(diag) => {
                out.insert("status".into(), json!("unknown"));
                out.insert("diagnostics".into(), json!(diag));
            }
        }
        out.insert(
            "caps".into(),
            json!({
                "prefix": self.limits.prefix_cap,
                "corpus": self.limits.corpus_len,
                "generations": self.corpus_generation,
                "corpus_stable": self.corpus_stable,
            }),
        );
        out.insert("injectivity".into(), self.injectivity.to_json(sys));
        if let Some(ur) = &self.ur {
            out.insert("unboundedly_repetitive".into(), ur.to_json(sys));
        }
        if let Some(d) = self.weak_delay.as_ref().and_then(DelayEstimate::delay) {
            out.insert("weak_delay_estimate".into(), json!(d));
        }
        Value::Object(out)
    }
}

fn witness_json(sys: &D0LSystem, ur: Option<&UrReport>, w: &NotCircularWitness) -> Value {
    match w {
        NotCircularWitness::Repetition {
            certificate,
            lifted_period,
            family,
        } => {
            let simplified = ur.map_or(sys, |u| &u.simplification.final_system);
            json!({
                "kind": "unboundedly_repetitive",
                "certificate": certificate.to_json(simplified),
                "lifted_period": sys.render(lifted_period),
                "family": {
                    "ell": certificate.ell,
                    "word": sys.render(&family.word),
                    "first": family.first.to_json(sys),
                    "second": family.second.to_json(sys),
                },
            })
        }
        NotCircularWitness::Collisions(steps) => json!({
            "kind": "collision_family",
            "family": steps.iter().map(|s| json!({
                "threshold": s.threshold,
                "u": sys.render(&s.u),
                "v": sys.render(&s.v),
                "image": sys.render(&s.image),
                "depth": s.depth,
            })).collect::<Vec<_>>(),
        }),
    }
}

/// Builds and checks the repetition family for φ^ℓ(w) = wᵏ.
pub fn repetition_family(m: &Morphism, w: &Word, ell: usize, k: usize) -> Result<std::result::Result<RepetitionFamily, String>> {
    let power = |w: &Word| m.iterate_with_budget(w, ell, DEFAULT_LENGTH_BUDGET);
    let u = w.pow(2 * k);
    let psi = m.power(ell)?;
    if power(&w.pow(2))? != u {
        return Ok(Err("φ^ℓ(w²) differs from w^{2k}".into()));
    }
    let expected: Word = w.concat(&u).concat(&w.pow(k - 1));
    if power(&w.pow(3))? != expected {
        return Ok(Err("φ^ℓ(w³) differs from w·w^{2k}·w^{k−1}".into()));
    }
    for i in 0..=w.len() {
        if power(&Word::from(&w[..i]))? == *w {
            return Ok(Err(format!("φ^ℓ maps the prefix of length {i} of w onto w")));
        }
    }
    let first = Interpretation::new(&psi, Word::new(), w.pow(2), Word::new(), u.len());
    let second = Interpretation::new(&psi, w.clone(), w.pow(3), w.pow(k - 1), u.len());
    let interior = |i: &Interpretation| -> BTreeSet<usize> {
        i.cuts.iter().copied().filter(|&c| c > 0 && c < u.len()).collect()
    };
    if !interior(&first).is_disjoint(&interior(&second)) {
        return Ok(Err("the two interpretations share an interior cut".into()));
    }
    Ok(Ok(RepetitionFamily { word: u, first, second }))
}

/// Largest def2 depth between (ε, u, ε) and (ε, v, ε).
fn collision_depth(m: &Morphism, u: &Word, v: &Word) -> usize {
    let n = m.apply(u).len();
    let a = Interpretation::new(m, Word::new(), u.clone(), Word::new(), n);
    let b = Interpretation::new(m, Word::new(), v.clone(), Word::new(), n);
    def2_depth(&a, &b).max(def2_depth(&b, &a))
}

pub fn decide_circularity(sys: &D0LSystem, limits: &Limits) -> Result<CircularityVerdict> {
    sys.require_propagating()?;
    let corpus = FactorCorpus::build(sys, limits.corpus_len, limits.generations)?;
    let report = injectivity(sys, &corpus)?;
    let mut verdict = CircularityVerdict {
        status: CircularityStatus::Unknown(Vec::new()),
        injectivity: report.clone(),
        ur: None,
        weak_delay: None,
        limits: *limits,
        corpus_generation: corpus.generation(),
        corpus_stable: corpus.is_stable(),
    };

    if report.system_injective() {
        let ur = is_unboundedly_repetitive(sys, limits.prefix_cap)?;
        verdict.status = match &ur.status {
            UrStatus::Yes {
                certificate,
                lifted_period,
            } => match repetition_family(sys.morphism(), lifted_period, certificate.ell, certificate.power)? {
                Ok(family) => CircularityStatus::NotCircular(NotCircularWitness::Repetition {
                    certificate: certificate.clone(),
                    lifted_period: lifted_period.clone(),
                    family: Box::new(family),
                }),
                Err(why) => CircularityStatus::Unknown(vec![why]),
            },
            UrStatus::NoCertified if report.system == SystemInjectivity::YesCertified => {
                CircularityStatus::Circular(CircularMode::Certified)
            }
            _ => CircularityStatus::Circular(CircularMode::BoundConditional),
        };
        verdict.ur = Some(ur);
        return Ok(verdict);
    }

    let m = sys.morphism();
    let mut pairs = corpus.collision_search();
    pairs.sort_by(|a, b| {
        let la = a.0.len().max(a.1.len());
        let lb = b.0.len().max(b.1.len());
        la.cmp(&lb).then_with(|| a.cmp(b))
    });
    let depths: Vec<usize> = pairs.iter().map(|(u, v)| collision_depth(m, u, v)).collect();
    let mut steps = Vec::new();
    let mut diagnostics = Vec::new();
    let mut t = 1;
    while 4 * t <= limits.corpus_len {
        match pairs.iter().zip(&depths).find(|(_, &d)| d >= 2 * t) {
            Some(((u, v), &depth)) => steps.push(CollisionStep {
                threshold: t,
                u: u.clone(),
                v: v.clone(),
                image: m.apply(u),
                depth,
            }),
            None => {
                let best = depths.iter().copied().max().unwrap_or(0);
                diagnostics.push(format!(
                    "no corpus collision reaches depth {} (deepest: {best}); collisions may stay bounded",
                    2 * t
                ));
                break;
            }
        }
        t *= 2;
    }
    if steps.is_empty() && diagnostics.is_empty() {
        diagnostics.push(format!("corpus bound {} too small to test growing collisions", limits.corpus_len));
    }
    verdict.weak_delay = Some(estimate_sync_delay_in(&corpus, DelayMode::Weak)?);
    verdict.status = if diagnostics.is_empty() {
        CircularityStatus::NotCircular(NotCircularWitness::Collisions(steps))
    } else {
        CircularityStatus::Unknown(diagnostics)
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(text: &str) -> D0LSystem {
        text.parse().unwrap()
    }

    const G1: &str = "alphabet: a b c\naxiom: a\na->abca\nb->bc\nc->bc";
    const TM: &str = "alphabet: a b\naxiom: a\na->ab\nb->ba";
    const FIB: &str = "alphabet: a b\naxiom: a\na->ab\nb->a";
    const DOUBLING: &str = "alphabet: a\naxiom: a\na->aa";

    fn corpus(text: &str, n: usize) -> FactorCorpus {
        FactorCorpus::build(&sys(text), n, 128).unwrap()
    }

    fn triples(c: &FactorCorpus, is: &[Interpretation]) -> Vec<(String, String, String, Vec<usize>)> {
        let s = c.system();
        is.iter()
            .map(|i| (s.render(&i.prefix), s.render(&i.preimage), s.render(&i.suffix), i.cuts.clone()))
            .collect()
    }

    fn t(p: &str, v: &str, s: &str, cuts: &[usize]) -> (String, String, String, Vec<usize>) {
        (p.into(), v.into(), s.into(), cuts.to_vec())
    }

    #[test]
    fn interpretation_examples() {
        let c = corpus(G1, 24);
        let u = c.system().parse_word("bcbc").unwrap();
        let got = triples(&c, &interpretations_of(&u, &c).unwrap());
        assert!(got.contains(&t("", "bc", "", &[0, 2, 4])));
        assert!(got.contains(&t("", "cb", "", &[0, 2, 4])));

        let c = corpus(DOUBLING, 16);
        let u = c.system().parse_word("aa").unwrap();
        let got = triples(&c, &interpretations_of(&u, &c).unwrap());
        assert_eq!(got, [t("", "a", "", &[0, 2]), t("a", "aa", "a", &[1])]);

        let c = corpus(TM, 24);
        let u = c.system().parse_word("ab").unwrap();
        let got = triples(&c, &interpretations_of(&u, &c).unwrap());
        assert!(got.contains(&t("", "a", "", &[0, 2])));
        assert!(got.contains(&t("b", "bb", "a", &[1])));
    }

    #[test]
    fn not_in_corpus() {
        let c = corpus("alphabet: a b c\naxiom: a\na->abc\nb->bc\nc->a", 12);
        let u = c.system().parse_word("cc").unwrap();
        assert!(matches!(interpretations_of(&u, &c), Err(Error::NotInCorpus(w)) if w == "cc"));
    }

    #[test]
    fn sync_examples() {
        let c = corpus(G1, 24);
        let u = c.system().parse_word("bcbc").unwrap();
        let r = sync_report(&u, &c).unwrap();
        for k in [0, 2, 4] {
            assert!(r.sync_positions.contains(&k));
        }

        let c = corpus(DOUBLING, 16);
        let u = c.system().parse_word("aa").unwrap();
        assert!(sync_report(&u, &c).unwrap().sync_positions.is_empty());

        // a letter with a single one-letter interpretation
        let c = corpus("alphabet: a b c\naxiom: a\na->ab\nb->c\nc->a", 8);
        let u = c.system().parse_word("c").unwrap();
        let r = sync_report(&u, &c).unwrap();
        assert_eq!(r.interpretations.len(), 1);
        assert_eq!(r.sync_positions, [0, 1]);
    }

    #[test]
    fn cuts_reexpand() {
        for (text, n) in [(G1, 10), (TM, 10), (FIB, 10), (DOUBLING, 8)] {
            let c = corpus(text, n);
            let m = c.system().morphism();
            for u in c.iter() {
                for i in interpretations_of(u, &c).unwrap() {
                    let mut full = i.prefix.concat(u);
                    full.extend_from_slice(&i.suffix);
                    assert_eq!(m.apply(&i.preimage), full);
                    assert!(i.prefix.len() < m.image(i.preimage[0]).len());
                    assert!(i.suffix.len() < m.image(*i.preimage.last().unwrap()).len());
                    for &k in &i.cuts {
                        let j = i.boundaries.iter().position(|&b| b == k + i.prefix.len()).unwrap();
                        assert_eq!(m.apply(&i.preimage[..j]), i.prefix.concat(&u[..k]));
                    }
                }
            }
        }
    }

    #[test]
    fn delay_estimates() {
        let limits = Limits { corpus_len: 16, ..Limits::default() };
        let e = estimate_sync_delay(&sys(DOUBLING), &limits, DelayMode::Weak).unwrap();
        assert_eq!(e.outcome, DelayOutcome::Failure { witness: sys(DOUBLING).parse_word(&"a".repeat(16)).unwrap() });

        let e = estimate_sync_delay(&sys(G1), &Limits::default(), DelayMode::Weak).unwrap();
        assert_eq!(e.outcome, DelayOutcome::Delay(G1_WEAK_DELAY));
        let e = estimate_sync_delay(&sys(TM), &Limits::default(), DelayMode::Strong).unwrap();
        assert_eq!(e.outcome, DelayOutcome::Delay(TM_STRONG_DELAY));
        let e = estimate_sync_delay(&sys(FIB), &Limits::default(), DelayMode::Strong).unwrap();
        assert_eq!(e.outcome, DelayOutcome::Delay(1));
    }

    /// Regression constants at corpus length 24.
    const G1_WEAK_DELAY: usize = 3;
    const TM_STRONG_DELAY: usize = 1;

    #[test]
    fn letter_alignment_implies_common_cut() {
        for (text, n) in [(G1, 10), (TM, 12), (FIB, 12)] {
            let c = corpus(text, n);
            for u in c.iter() {
                let is = interpretations_of(u, &c).unwrap();
                for a in &is {
                    for b in &is {
                        for i in 1..=a.preimage.len() {
                            let start = a.start(i);
                            let aligned = (1..=b.preimage.len())
                                .any(|j| b.start(j) == start && b.preimage[j - 1] == a.preimage[i - 1]);
                            if aligned && (0..=u.len() as i64).contains(&start) {
                                assert!(a.cuts.contains(&(start as usize)) && b.cuts.contains(&(start as usize)));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decisions() {
        let limits = Limits::default();
        let v = decide_circularity(&sys(G1), &limits).unwrap();
        let CircularityStatus::NotCircular(NotCircularWitness::Collisions(steps)) = &v.status else { panic!() };
        let g1 = sys(G1);
        let got: Vec<(usize, String, String)> =
            steps.iter().map(|s| (s.threshold, g1.render(&s.u), g1.render(&s.v))).collect();
        assert_eq!(
            got,
            [
                (1, "bc".into(), "cb".into()),
                (2, "bcbc".into(), "cbcb".into()),
                (4, "bcbcbcbc".into(), "cbcbcbcb".into())
            ]
        );
        assert_eq!(v.weak_delay.as_ref().and_then(DelayEstimate::delay), Some(G1_WEAK_DELAY));

        let d = sys(DOUBLING);
        let v = decide_circularity(&d, &limits).unwrap();
        let CircularityStatus::NotCircular(NotCircularWitness::Repetition { certificate, family, .. }) = &v.status
        else {
            panic!()
        };
        assert_eq!((certificate.ell, certificate.power), (1, 2));
        assert_eq!(d.render(&family.word), "aaaa");
        assert_eq!(family.first.cuts, [0, 2, 4]);
        assert_eq!(family.second.cuts, [1, 3]);

        let v = decide_circularity(&sys(TM), &limits).unwrap();
        assert!(matches!(v.status, CircularityStatus::Circular(CircularMode::BoundConditional)));
        let v = decide_circularity(&sys(FIB), &limits).unwrap();
        assert!(matches!(v.status, CircularityStatus::Circular(CircularMode::Certified)));
    }

    #[test]
    fn short_corpus_gives_unknown() {
        let limits = Limits { corpus_len: 3, ..Limits::default() };
        let v = decide_circularity(&sys(G1), &limits).unwrap();
        assert!(matches!(v.status, CircularityStatus::Unknown(_)));
    }

    #[test]
    fn erasing_rejected() {
        let s = sys("alphabet: a b\nerasing: allowed\naxiom: a\na->ab\nb->");
        assert!(matches!(decide_circularity(&s, &Limits::default()), Err(Error::Erasing(_))));
    }
}
