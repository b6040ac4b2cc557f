//! Growth of letters under iteration.
//!
//! Everything here is read off the occurrence graph (edge a → b iff b occurs
//! in φ(a)) and its strongly connected components:
//!
//! * a letter is bounded iff it cannot reach a cyclic component containing a
//!   letter with an image of length at least two;
//! * |φⁿ(a)| = Θ(n^α βⁿ) where β is the largest Perron root among the cyclic
//!   components reachable from a, and α + 1 is the largest number of
//!   components with root exactly β on one path of the condensation.
//!
//! Perron roots are compared exactly (see [`crate::algebraic`]), so the
//! partition of the alphabet into growth classes is exact.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde_json::{json, Map, Value};

use crate::algebraic::{charpoly, RealRoot};
use crate::error::{Error, Result};
use crate::system::{D0LSystem, Morphism};
use crate::word::{Letter, Word};

/// Strongly connected components of the occurrence graph, sinks first.
#[derive(Debug, Clone)]
pub(crate) struct Condensation {
    pub comp_of: Vec<usize>,
    pub comps: Vec<Vec<Letter>>,
    pub cyclic: Vec<bool>,
    /// Successor components (excluding the component itself).
    pub succ: Vec<BTreeSet<usize>>,
}

impl Condensation {
    pub fn new(m: &Morphism) -> Self {
        let n = m.size();
        let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for a in m.alphabet().letters() {
            for b in m.successors(a) {
                g.add_edge(nodes[a.index()], nodes[b.index()], ());
            }
        }
        // tarjan_scc yields components in reverse topological order
        let sccs = tarjan_scc(&g);
        let mut comp_of = vec![0; n];
        let mut comps = Vec::with_capacity(sccs.len());
        for (ci, scc) in sccs.iter().enumerate() {
            let mut letters: Vec<Letter> = scc.iter().map(|v| Letter(v.index() as u32)).collect();
            letters.sort();
            for &a in &letters {
                comp_of[a.index()] = ci;
            }
            comps.push(letters);
        }
        let mut cyclic = vec![false; comps.len()];
        let mut succ = vec![BTreeSet::new(); comps.len()];
        for a in m.alphabet().letters() {
            let ca = comp_of[a.index()];
            for b in m.successors(a) {
                let cb = comp_of[b.index()];
                if ca == cb {
                    cyclic[ca] = true;
                } else {
                    succ[ca].insert(cb);
                }
            }
        }
        Condensation {
            comp_of,
            comps,
            cyclic,
            succ,
        }
    }

    /// Components listed so that successors come before predecessors.
    pub fn sinks_first(&self) -> impl Iterator<Item = usize> {
        0..self.comps.len()
    }
}

/// Bounded letters of a propagating morphism, as a per-letter mask.
pub fn bounded_mask(m: &Morphism) -> Result<Vec<bool>> {
    m.require_propagating()?;
    let cond = Condensation::new(m);
    // expanding: cyclic component with some letter whose image has length ≥ 2
    let mut unbounded = vec![false; cond.comps.len()];
    for c in cond.sinks_first() {
        let expanding =
            cond.cyclic[c] && cond.comps[c].iter().any(|&a| m.image(a).len() >= 2);
        unbounded[c] = expanding || cond.succ[c].iter().any(|&d| unbounded[d]);
    }
    Ok(m
        .alphabet()
        .letters()
        .map(|a| !unbounded[cond.comp_of[a.index()]])
        .collect())
}

/// The set A₀ of bounded letters, in alphabet order.
pub fn bounded_letters(sys: &D0LSystem) -> Result<Vec<Letter>> {
    let mask = bounded_mask(sys.morphism())?;
    Ok(sys.alphabet().letters().filter(|a| mask[a.index()]).collect())
}

/// |φⁿ(a)| = Θ(n^α βⁿ).
#[derive(Debug, Clone)]
pub struct GrowthClass {
    pub alpha: u32,
    pub beta: RealRoot,
}

impl GrowthClass {
    pub fn is_bounded(&self) -> bool {
        self.alpha == 0 && self.beta.exact_eq(&RealRoot::integer(1))
    }
}

/// Growth classes of every letter, with β values ranked exactly.
#[derive(Debug, Clone)]
pub struct GrowthAnalysis {
    classes: Vec<GrowthClass>,
    beta_rank: Vec<usize>,
}

impl GrowthAnalysis {
    pub fn new(m: &Morphism) -> Result<Self> {
        m.require_propagating()?;
        let cond = Condensation::new(m);
        let mat = m.incidence_matrix();

        // Perron root of every cyclic component
        let mut roots: Vec<Option<RealRoot>> = Vec::with_capacity(cond.comps.len());
        for (c, letters) in cond.comps.iter().enumerate() {
            if !cond.cyclic[c] {
                roots.push(None);
                continue;
            }
            let idx: Vec<usize> = letters.iter().map(|a| a.index()).collect();
            let p = charpoly(&mat.restrict(&idx).rows());
            let r = RealRoot::largest(&p)
                .ok_or_else(|| Error::Invariant("cyclic component without a real root".into()))?;
            roots.push(Some(r));
        }

        // distinct root values, ascending
        let mut distinct: Vec<RealRoot> = Vec::new();
        for r in roots.iter().flatten() {
            if !distinct.iter().any(|d| d.exact_eq(r)) {
                distinct.push(r.clone());
            }
        }
        distinct.sort_by(|a, b| a.cmp_exact(b));
        let rank_of = |r: &RealRoot| distinct.iter().position(|d| d.exact_eq(r)).unwrap();
        let comp_rank: Vec<Option<usize>> = roots.iter().map(|r| r.as_ref().map(rank_of)).collect();

        // largest reachable rank
        let mut reach_rank: Vec<Option<usize>> = vec![None; cond.comps.len()];
        for c in cond.sinks_first() {
            let mut best = comp_rank[c];
            for &d in &cond.succ[c] {
                best = best.max(reach_rank[d]);
            }
            reach_rank[c] = best;
        }

        // longest chain of components with a given rank, per target rank
        let chain_len = |target: usize| -> Vec<u32> {
            let mut best = vec![0u32; cond.comps.len()];
            for c in cond.sinks_first() {
                let own = u32::from(comp_rank[c] == Some(target));
                let tail = cond.succ[c].iter().map(|&d| best[d]).max().unwrap_or(0);
                best[c] = own + tail;
            }
            best
        };
        let mut chains: Vec<Option<Vec<u32>>> = vec![None; distinct.len()];

        let mut classes = Vec::with_capacity(m.size());
        let mut beta_rank = Vec::with_capacity(m.size());
        for a in m.alphabet().letters() {
            let c = cond.comp_of[a.index()];
            let rank = reach_rank[c].ok_or_else(|| {
                Error::Invariant("letter of a propagating morphism reaches no cycle".into())
            })?;
            let chain = chains[rank].get_or_insert_with(|| chain_len(rank));
            classes.push(GrowthClass {
                alpha: chain[c] - 1,
                beta: distinct[rank].clone(),
            });
            beta_rank.push(rank);
        }
        Ok(GrowthAnalysis { classes, beta_rank })
    }

    pub fn class(&self, a: Letter) -> &GrowthClass {
        &self.classes[a.index()]
    }

    pub fn classes(&self) -> &[GrowthClass] {
        &self.classes
    }

    /// Orders letters by growth: β first, then α.
    pub fn cmp_letters(&self, a: Letter, b: Letter) -> Ordering {
        (self.beta_rank[a.index()], self.classes[a.index()].alpha)
            .cmp(&(self.beta_rank[b.index()], self.classes[b.index()].alpha))
    }
}

pub fn growth_class(sys: &D0LSystem, a: Letter) -> Result<GrowthClass> {
    Ok(GrowthAnalysis::new(sys.morphism())?.class(a).clone())
}

/// The partition Σ₀ ∪ Σ₁ ∪ … ∪ Σ_m, in increasing growth order. Σ₀ is the
/// set of bounded letters and is kept even when empty.
#[derive(Debug, Clone)]
pub struct SigmaPartition {
    pub classes: Vec<Vec<Letter>>,
    /// Growth class shared by the letters of each Σᵢ (None for an empty Σ₀).
    pub growth: Vec<Option<GrowthClass>>,
}

impl SigmaPartition {
    /// A_j = Σ₀ ∪ … ∪ Σ_j.
    pub fn cumulative(&self, j: usize) -> Vec<Letter> {
        let mut out: Vec<Letter> = self.classes[..=j].iter().flatten().copied().collect();
        out.sort();
        out
    }

    pub fn index_of(&self, a: Letter) -> usize {
        self.classes.iter().position(|c| c.contains(&a)).expect("partition covers the alphabet")
    }
}

pub fn sigma_partition(sys: &D0LSystem) -> Result<SigmaPartition> {
    let m = sys.morphism();
    let analysis = GrowthAnalysis::new(m)?;
    let mask = bounded_mask(m)?;
    for a in m.alphabet().letters() {
        if mask[a.index()] != analysis.class(a).is_bounded() {
            return Err(Error::Invariant(format!(
                "bounded-letter test and growth class disagree on `{}`",
                m.alphabet().name(a)
            )));
        }
    }
    let bounded: Vec<Letter> = m.alphabet().letters().filter(|a| mask[a.index()]).collect();
    let mut growing: Vec<Letter> = m.alphabet().letters().filter(|a| !mask[a.index()]).collect();
    growing.sort_by(|&a, &b| analysis.cmp_letters(a, b).then(a.cmp(&b)));

    let mut classes = vec![bounded.clone()];
    let mut growth = vec![bounded.first().map(|&a| analysis.class(a).clone())];
    for a in growing {
        let same = classes
            .last()
            .and_then(|c| c.last())
            .is_some_and(|&b| !mask[b.index()] && analysis.cmp_letters(a, b) == Ordering::Equal);
        if same {
            classes.last_mut().unwrap().push(a);
        } else {
            classes.push(vec![a]);
            growth.push(Some(analysis.class(a).clone()));
        }
    }
    Ok(SigmaPartition { classes, growth })
}

/// Which side of the unbounded spine the bounded material accumulates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A cycle of the map c ↦ last (resp. first) unbounded letter of φ(c) along
/// which non-empty bounded material is appended, so bounded runs next to the
/// spine grow without limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushyWitness {
    pub side: Side,
    pub cycle: Vec<Letter>,
    /// The letter of the cycle carrying bounded material, and that material.
    pub carrier: Letter,
    pub material: Word,
}

pub fn pushy_witness(sys: &D0LSystem) -> Result<Option<PushyWitness>> {
    let m = sys.morphism();
    let mask = bounded_mask(m)?;
    let unbounded: Vec<Letter> = m.alphabet().letters().filter(|a| !mask[a.index()]).collect();
    for side in [Side::Right, Side::Left] {
        // spine map and the bounded material it appends
        let step = |c: Letter| -> (Letter, Word) {
            let img = m.image(c);
            match side {
                Side::Right => {
                    let i = img.iter().rposition(|b| !mask[b.index()]).expect("unbounded image");
                    (img[i], Word::from(&img[i + 1..]))
                }
                Side::Left => {
                    let i = img.iter().position(|b| !mask[b.index()]).expect("unbounded image");
                    (img[i], Word::from(&img[..i]))
                }
            }
        };
        for &start in &unbounded {
            let mut path = vec![start];
            let mut cur = start;
            let cycle_start = loop {
                cur = step(cur).0;
                if let Some(pos) = path.iter().position(|&x| x == cur) {
                    break pos;
                }
                path.push(cur);
            };
            let cycle = path[cycle_start..].to_vec();
            for &c in &cycle {
                let (_, material) = step(c);
                if !material.is_empty() {
                    return Ok(Some(PushyWitness {
                        side,
                        cycle,
                        carrier: c,
                        material,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// True iff infinitely many factors consist of bounded letters only.
pub fn is_pushy(sys: &D0LSystem) -> Result<bool> {
    Ok(pushy_witness(sys)?.is_some())
}

/// True iff some power of the incidence matrix (exponent ≤ |A|²) is positive.
pub fn is_primitive(m: &Morphism) -> bool {
    let n = m.size();
    let base: Vec<Vec<bool>> = m
        .incidence_matrix()
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x > 0).collect())
        .collect();
    let mut cur = base.clone();
    for _ in 1..=n * n {
        if cur.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if cur[i][k] {
                    for j in 0..n {
                        next[i][j] |= base[k][j];
                    }
                }
            }
        }
        cur = next;
    }
    false
}

/// The synchronization bound for factors over bounded letters:
/// `L = 3·‖φ^{n+1}‖·|w₀|` with n the least exponent after which the lengths
/// of all bounded letters are constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedSyncBound {
    pub stabilization: usize,
    pub norm: u128,
    pub bound: u128,
}

pub fn bounded_sync_bound_details(sys: &D0LSystem) -> Result<BoundedSyncBound> {
    let m = sys.morphism();
    let mask = bounded_mask(m)?;
    let overflow = || Error::BudgetExceeded { limit: usize::MAX };
    let mut n = 0;
    loop {
        let cur = m.image_lengths(n).ok_or_else(overflow)?;
        let next = m.image_lengths(n + 1).ok_or_else(overflow)?;
        if (0..m.size()).filter(|&i| mask[i]).all(|i| cur[i] == next[i]) {
            break;
        }
        n += 1;
    }
    let norm = *m.image_lengths(n + 1).ok_or_else(overflow)?.iter().max().unwrap();
    let bound = 3u128
        .checked_mul(norm)
        .and_then(|x| x.checked_mul(sys.axiom().len() as u128))
        .ok_or_else(overflow)?;
    Ok(BoundedSyncBound {
        stabilization: n,
        norm,
        bound,
    })
}

pub fn bounded_sync_bound(sys: &D0LSystem) -> Result<u128> {
    Ok(bounded_sync_bound_details(sys)?.bound)
}

/// Everything `classify` reports about growth.
#[derive(Debug, Clone)]
pub struct Classification {
    pub bounded: Vec<Letter>,
    pub analysis: GrowthAnalysis,
    pub sigma: SigmaPartition,
    pub pushy: Option<PushyWitness>,
    pub primitive: bool,
    pub sync_bound: BoundedSyncBound,
}

pub fn classify(sys: &D0LSystem) -> Result<Classification> {
    Ok(Classification {
        bounded: bounded_letters(sys)?,
        analysis: GrowthAnalysis::new(sys.morphism())?,
        sigma: sigma_partition(sys)?,
        pushy: pushy_witness(sys)?,
        primitive: is_primitive(sys.morphism()),
        sync_bound: bounded_sync_bound_details(sys)?,
    })
}

/// Integers beyond u64 are rendered as strings.
pub(crate) fn json_u128(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| json!(x.to_string()), |x| json!(x))
}

impl Classification {
    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        let ab = sys.alphabet();
        let names = |ls: &[Letter]| ls.iter().map(|&a| ab.name(a)).collect::<Vec<_>>();
        let mut growth = Map::new();
        for a in ab.letters() {
            let c = self.analysis.class(a);
            growth.insert(
                ab.name(a).to_string(),
                json!({"alpha": c.alpha, "beta": c.beta.decimal(9)}),
            );
        }
        json!({
            "bounded": names(&self.bounded),
            "growth": growth,
            "sigma": self.sigma.classes.iter().map(|c| names(c)).collect::<Vec<_>>(),
            "pushy": self.pushy.is_some(),
            "primitive": self.primitive,
            "bounded_sync_bound": json_u128(self.sync_bound.bound),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(text: &str) -> D0LSystem {
        text.parse().unwrap()
    }

    fn g1() -> D0LSystem {
        sys("alphabet: a b c\naxiom: a\na->abca\nb->bc\nc->bc")
    }
    fn tm() -> D0LSystem {
        sys("alphabet: a b\naxiom: a\na->ab\nb->ba")
    }
    fn spine() -> D0LSystem {
        sys("alphabet: a b\naxiom: a\na->ab\nb->b")
    }
    fn fib() -> D0LSystem {
        sys("alphabet: a b\naxiom: a\na->ab\nb->a")
    }

    fn names(s: &D0LSystem, ls: &[Letter]) -> Vec<String> {
        ls.iter().map(|&a| s.alphabet().name(a).to_string()).collect()
    }

    #[test]
    fn bounded_letters_examples() {
        assert!(bounded_letters(&tm()).unwrap().is_empty());
        assert_eq!(names(&spine(), &bounded_letters(&spine()).unwrap()), ["b"]);
        assert!(bounded_letters(&g1()).unwrap().is_empty());
    }

    #[test]
    fn growth_class_examples() {
        let g = g1();
        let a = growth_class(&g, Letter(0)).unwrap();
        assert_eq!((a.alpha, a.beta.decimal(9)), (1, "2".to_string()));
        let b = growth_class(&g, Letter(1)).unwrap();
        assert_eq!((b.alpha, b.beta.decimal(9)), (0, "2".to_string()));

        let s = growth_class(&spine(), Letter(0)).unwrap();
        assert_eq!((s.alpha, s.beta.decimal(9)), (1, "1".to_string()));
        let s = growth_class(&spine(), Letter(1)).unwrap();
        assert!(s.is_bounded());

        let f = growth_class(&fib(), Letter(0)).unwrap();
        assert_eq!(f.alpha, 0);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((f.beta.to_f64() - golden).abs() < 1e-9);
    }

    #[test]
    fn sigma_partition_examples() {
        let g = g1();
        let p = sigma_partition(&g).unwrap();
        let got: Vec<Vec<String>> = p.classes.iter().map(|c| names(&g, c)).collect();
        assert_eq!(got, vec![vec![], vec!["b", "c"], vec!["a"]]);

        let s = spine();
        let p = sigma_partition(&s).unwrap();
        let got: Vec<Vec<String>> = p.classes.iter().map(|c| names(&s, c)).collect();
        assert_eq!(got, vec![vec!["b"], vec!["a"]]);

        let t = tm();
        let p = sigma_partition(&t).unwrap();
        let got: Vec<Vec<String>> = p.classes.iter().map(|c| names(&t, c)).collect();
        assert_eq!(got, vec![vec![], vec!["a", "b"]]);
    }

    #[test]
    fn cumulative_sets_are_closed() {
        for s in [g1(), tm(), spine(), fib()] {
            let p = sigma_partition(&s).unwrap();
            for j in 0..p.classes.len() {
                let aj = p.cumulative(j);
                for &a in &aj {
                    assert!(s.morphism().image(a).iter().all(|b| aj.contains(b)));
                }
            }
        }
    }

    #[test]
    fn pushiness() {
        let w = pushy_witness(&spine()).unwrap().unwrap();
        assert_eq!(w.side, Side::Right);
        assert_eq!(spine().render(&w.material), "b");
        assert!(!is_pushy(&tm()).unwrap());
        assert!(!is_pushy(&g1()).unwrap());
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(tm().morphism()));
        assert!(!is_primitive(g1().morphism()));
        assert!(is_primitive(fib().morphism()));
    }

    #[test]
    fn sync_bounds() {
        let b = bounded_sync_bound_details(&spine()).unwrap();
        assert_eq!((b.stabilization, b.bound), (0, 6));
        assert_eq!(bounded_sync_bound(&tm()).unwrap(), 6);
        assert_eq!(bounded_sync_bound(&g1()).unwrap(), 12);
        let s = sys("alphabet: a b c d\naxiom: a\na->abc\nb->b\nc->d\nd->d");
        let b = bounded_sync_bound_details(&s).unwrap();
        assert_eq!(b.stabilization, 0);
        let s = sys("alphabet: a b c d\naxiom: a\na->ac\nc->bd\nb->b\nd->d");
        // c has length 1 then 2 forever: stabilizes after one step
        let b = bounded_sync_bound_details(&s).unwrap();
        assert_eq!(b.stabilization, 1);
        // ‖φ²‖ = |φ²(a)| = |ac bd| = 4
        assert_eq!((b.norm, b.bound), (4, 12));
    }

    #[test]
    fn classification_json() {
        let g = g1();
        let v = classify(&g).unwrap().to_json(&g);
        assert_eq!(
            v,
            json!({
                "bounded": [],
                "growth": {
                    "a": {"alpha": 1, "beta": "2"},
                    "b": {"alpha": 0, "beta": "2"},
                    "c": {"alpha": 0, "beta": "2"},
                },
                "sigma": [[], ["b", "c"], ["a"]],
                "pushy": false,
                "primitive": false,
                "bounded_sync_bound": 12,
            })
        );
    }

    #[test]
    fn erasing_rejected() {
        let s = sys("alphabet: a b\nerasing: allowed\naxiom: a\na->ab\nb->");
        assert!(matches!(bounded_letters(&s), Err(Error::Erasing(_))));
        assert!(matches!(sigma_partition(&s), Err(Error::Erasing(_))));
    }
}
