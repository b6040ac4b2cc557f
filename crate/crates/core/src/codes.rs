//! Codes, injectivity and injective simplification.
//!
//! [`is_code`] runs Sardinas–Patterson as a shortest-path search over
//! dangling suffixes, so a non-code comes with a shortest ambiguous word.
//! Simplification computes the free hull of the image set: while the current
//! generating set Y is not a code, a double factorization starts with two
//! distinct generators y = y'z, and y is replaced by z. Each replacement stays
//! inside the free hull, so the loop ends at its base, which has fewer
//! elements than the alphabet whenever φ is not injective.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde_json::{json, Map, Value};

use crate::corpus::FactorCorpus;
use crate::error::{Error, Result};
use crate::system::{D0LSystem, Morphism};
use crate::word::{Alphabet, Letter, Word};

/// Two distinct factorizations of `word` over a word list, as indices into
/// that list. The first indices differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleFactorization {
    pub word: Word,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeTest {
    Code,
    NotCode(DoubleFactorization),
}

impl CodeTest {
    pub fn is_code(&self) -> bool {
        matches!(self, CodeTest::Code)
    }
}

struct Partial {
    dangling: Word,
    left: Vec<usize>,
    right: Vec<usize>,
    left_ahead: bool,
}

/// Sardinas–Patterson test. A word listed twice makes the list a non-code.
pub fn is_code(words: &[Word]) -> Result<CodeTest> {
    if words.iter().any(|w| w.is_empty()) {
        return Err(Error::EmptyCodeWord);
    }
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if words[i] == words[j] {
                return Ok(CodeTest::NotCode(DoubleFactorization {
                    word: words[i].clone(),
                    left: vec![i],
                    right: vec![j],
                }));
            }
        }
    }

    // cost of a partial = length of the side that is ahead; it never
    // decreases, and the future of a partial depends only on its dangling
    // suffix
    let mut nodes: Vec<Partial> = Vec::new();
    let mut heap = BinaryHeap::new();
    for (i, short) in words.iter().enumerate() {
        for (j, long) in words.iter().enumerate() {
            if i != j && long.len() > short.len() && long.starts_with(short) {
                heap.push(Reverse((long.len(), nodes.len())));
                nodes.push(Partial {
                    dangling: Word::from(&long[short.len()..]),
                    left: vec![i],
                    right: vec![j],
                    left_ahead: false,
                });
            }
        }
    }
    let mut settled: HashSet<Word> = HashSet::new();
    while let Some(Reverse((cost, id))) = heap.pop() {
        if !settled.insert(nodes[id].dangling.clone()) {
            continue;
        }
        for (t, x) in words.iter().enumerate() {
            let node = &nodes[id];
            let d = &node.dangling;
            let (mut left, mut right) = (node.left.clone(), node.right.clone());
            let behind = if node.left_ahead { &mut right } else { &mut left };
            behind.push(t);
            if x == d {
                let word = left.iter().flat_map(|&k| words[k].iter().copied()).collect();
                return Ok(CodeTest::NotCode(DoubleFactorization { word, left, right }));
            }
            let (dangling, left_ahead, next_cost) = if x.len() < d.len() && d.starts_with(x) {
                (Word::from(&d[x.len()..]), node.left_ahead, cost)
            } else if d.len() < x.len() && x.starts_with(d) {
                let rest = Word::from(&x[d.len()..]);
                let c = cost + rest.len();
                (rest, !node.left_ahead, c)
            } else {
                continue;
            };
            if settled.contains(&dangling) {
                continue;
            }
            heap.push(Reverse((next_cost, nodes.len())));
            nodes.push(Partial {
                dangling,
                left,
                right,
                left_ahead,
            });
        }
    }
    Ok(CodeTest::Code)
}

/// Distinct words with the same image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub u: Word,
    pub v: Word,
}

/// `None` iff φ is injective; otherwise a shortest-image collision.
pub fn morphism_collision(m: &Morphism) -> Result<Option<Collision>> {
    m.require_propagating()?;
    Ok(match is_code(m.images())? {
        CodeTest::Code => None,
        CodeTest::NotCode(df) => Some(Collision {
            u: df.left.iter().map(|&i| Letter(i as u32)).collect(),
            v: df.right.iter().map(|&i| Letter(i as u32)).collect(),
        }),
    })
}

pub fn is_injective(m: &Morphism) -> Result<bool> {
    Ok(morphism_collision(m)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemInjectivity {
    YesCertified,
    YesUpToBound(usize),
    No(Collision),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub morphism: Option<Collision>,
    pub system: SystemInjectivity,
}

impl InjectivityReport {
    pub fn morphism_injective(&self) -> bool {
        self.morphism.is_none()
    }

    pub fn system_injective(&self) -> bool {
        !matches!(self.system, SystemInjectivity::No(_))
    }

    pub fn to_json(&self, sys: &D0LSystem) -> Value {
        let mut out = Map::new();
        out.insert("morphism_injective".into(), json!(self.morphism_injective()));
        if let Some(c) = &self.morphism {
            out.insert("witness".into(), json!([sys.render(&c.u), sys.render(&c.v)]));
        }
        match &self.system {
            SystemInjectivity::YesCertified => {
                out.insert("system_injective".into(), json!("yes"));
            }
            SystemInjectivity::YesUpToBound(b) => {
                out.insert("system_injective".into(), json!("bound"));
                out.insert("bound".into(), json!(b));
            }
            SystemInjectivity::No(c) => {
                out.insert("system_injective".into(), json!("no"));
                out.insert("system_witness".into(), json!([sys.render(&c.u), sys.render(&c.v)]));
            }
        }
        Value::Object(out)
    }
}

/// Injectivity of φ, and of φ restricted to the corpus factors. The
/// system-level witness is the shortest colliding pair, in letter order.
pub fn injectivity(sys: &D0LSystem, corpus: &FactorCorpus) -> Result<InjectivityReport> {
    let morphism = morphism_collision(sys.morphism())?;
    let system = if morphism.is_none() {
        SystemInjectivity::YesCertified
    } else {
        let shortest = corpus.collision_search().into_iter().min_by(|a, b| {
            let la = a.0.len().max(a.1.len());
            let lb = b.0.len().max(b.1.len());
            la.cmp(&lb).then_with(|| a.cmp(b))
        });
        match shortest {
            Some((u, v)) => SystemInjectivity::No(Collision { u, v }),
            None => SystemInjectivity::YesUpToBound(corpus.max_len()),
        }
    };
    Ok(InjectivityReport { morphism, system })
}

/// A morphism between two (possibly different) alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterMap {
    pub source: Alphabet,
    pub target: Alphabet,
    pub images: Vec<Word>,
}

impl LetterMap {
    pub fn identity(alphabet: &Alphabet) -> Self {
        LetterMap {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images: alphabet.letters().map(|a| Word::from(vec![a])).collect(),
        }
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a.index()]
    }

    pub fn apply(&self, w: &[Letter]) -> Word {
        w.iter().flat_map(|&a| self.images[a.index()].iter().copied()).collect()
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn after(&self, inner: &LetterMap) -> LetterMap {
        LetterMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            images: inner.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        for a in self.source.letters() {
            out.insert(
                self.source.name(a).to_string(),
                json!(self.target.render(self.image(a))),
            );
        }
        Value::Object(out)
    }
}

/// φ = decode ∘ merge and ψ = merge ∘ decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplificationStep {
    pub merge: LetterMap,
    pub decode: LetterMap,
    pub simplified: Morphism,
}

impl SimplificationStep {
    pub fn target_alphabet(&self) -> &Alphabet {
        self.simplified.alphabet()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "alphabet": self.target_alphabet().names(),
            "decode": self.decode.to_json(),
            "merge": self.merge.to_json(),
            "simplified": self.simplified_json(),
        })
    }

    fn simplified_json(&self) -> Value {
        let b = self.simplified.alphabet();
        let mut out = Map::new();
        for x in b.letters() {
            out.insert(b.name(x).to_string(), json!(b.render(self.simplified.image(x))));
        }
        Value::Object(out)
    }
}

/// Default cap on free-hull refinement steps.
pub const DEFAULT_SEARCH_BUDGET: usize = 100_000;

/// Factorization of `w` over the list `code`, as indices.
fn factorize(w: &[Letter], code: &[Word]) -> Option<Vec<usize>> {
    // next[i]: generator starting a factorization of w[i..]
    let mut next: Vec<Option<usize>> = vec![None; w.len() + 1];
    let mut ok = vec![false; w.len() + 1];
    ok[w.len()] = true;
    for i in (0..w.len()).rev() {
        for (t, y) in code.iter().enumerate() {
            if w[i..].starts_with(y) && ok[i + y.len()] {
                next[i] = Some(t);
                ok[i] = true;
                break;
            }
        }
    }
    if !ok[0] {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let t = next[i]?;
        out.push(t);
        i += code[t].len();
    }
    Some(out)
}

/// One step of simplification, or `None` if φ is already injective.
fn simplify_step(m: &Morphism, steps: &mut usize, budget: usize, completed: usize) -> Result<Option<SimplificationStep>> {
    if is_injective(m)? {
        return Ok(None);
    }
    let mut hull: Vec<Word> = Vec::new();
    for img in m.images() {
        if !hull.contains(img) {
            hull.push(img.clone());
        }
    }
    while let CodeTest::NotCode(df) = is_code(&hull)? {
        *steps += 1;
        if *steps > budget {
            return Err(Error::SearchBudget { steps: budget, completed });
        }
        let (i, j) = (df.left[0], df.right[0]);
        let (short, long) = if hull[i].len() < hull[j].len() { (i, j) } else { (j, i) };
        if !hull[long].starts_with(&hull[short]) {
            return Err(Error::Invariant("double factorization does not start with a prefix pair".into()));
        }
        let z = Word::from(&hull[long][hull[short].len()..]);
        if hull.contains(&z) {
            hull.remove(long);
        } else {
            hull[long] = z;
        }
    }
    if hull.len() >= m.size() {
        return Err(Error::Invariant("free hull base is not smaller than the alphabet".into()));
    }

    let factorizations: Vec<Vec<usize>> = m
        .images()
        .iter()
        .map(|img| factorize(img, &hull))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Invariant("image does not factor over the free hull".into()))?;

    // fresh names in first-use order
    let mut rename = vec![None; hull.len()];
    let mut order = Vec::new();
    for &t in factorizations.iter().flatten() {
        if rename[t].is_none() {
            rename[t] = Some(Letter(order.len() as u32));
            order.push(t);
        }
    }
    if order.len() != hull.len() {
        return Err(Error::Invariant("unused generator in the free hull base".into()));
    }
    let target = Alphabet::fresh(hull.len());
    let merge = LetterMap {
        source: m.alphabet().clone(),
        target: target.clone(),
        images: factorizations
            .iter()
            .map(|f| f.iter().map(|&t| rename[t].unwrap()).collect())
            .collect(),
    };
    let decode = LetterMap {
        source: target.clone(),
        target: m.alphabet().clone(),
        images: order.iter().map(|&t| hull[t].clone()).collect(),
    };
    let simplified = Morphism::new(target, decode.images.iter().map(|w| merge.apply(w)).collect())?;
    let step = SimplificationStep {
        merge,
        decode,
        simplified,
    };
    verify_step(m, &step)?;
    Ok(Some(step))
}

/// Checks φ = decode ∘ merge and ψ = merge ∘ decode letterwise, and |B| < |A|.
pub fn verify_step(m: &Morphism, step: &SimplificationStep) -> Result<()> {
    for a in m.alphabet().letters() {
        if step.decode.apply(step.merge.image(a)) != *m.image(a) {
            return Err(Error::Invariant(format!(
                "decode(merge({})) differs from its image",
                m.alphabet().name(a)
            )));
        }
    }
    for b in step.target_alphabet().letters() {
        if step.merge.apply(step.decode.image(b)) != *step.simplified.image(b) {
            return Err(Error::Invariant("simplified morphism is not merge ∘ decode".into()));
        }
    }
    if step.target_alphabet().len() >= m.size() {
        return Err(Error::Invariant("simplification step does not shrink the alphabet".into()));
    }
    Ok(())
}

/// Simplification chain of an endomorphism, ending at an injective one.
pub fn simplify_morphism(m: &Morphism, budget: usize) -> Result<(Vec<SimplificationStep>, Morphism)> {
    m.require_propagating()?;
    let mut chain = Vec::new();
    let mut current = m.clone();
    let mut steps = 0;
    while let Some(step) = simplify_step(&current, &mut steps, budget, chain.len())? {
        current = step.simplified.clone();
        chain.push(step);
    }
    if chain.len() >= m.size().max(1) {
        return Err(Error::Invariant("simplification chain too long".into()));
    }
    Ok((chain, current))
}

#[derive(Debug, Clone)]
pub struct InjectiveSimplification {
    pub chain: Vec<SimplificationStep>,
    pub final_system: D0LSystem,
    /// decode₁ ∘ … ∘ decode_n, from the final alphabet to the original one.
    pub lift: LetterMap,
}

impl InjectiveSimplification {
    pub fn to_json(&self) -> Value {
        json!({
            "simplification": self.chain.iter().map(SimplificationStep::to_json).collect::<Vec<_>>(),
            "final_system": self.final_system.to_text(),
            "lift": self.lift.to_json(),
        })
    }
}

pub fn injective_simplification(sys: &D0LSystem) -> Result<InjectiveSimplification> {
    injective_simplification_with_budget(sys, DEFAULT_SEARCH_BUDGET)
}

pub fn injective_simplification_with_budget(sys: &D0LSystem, budget: usize) -> Result<InjectiveSimplification> {
    let (chain, last) = simplify_morphism(sys.morphism(), budget)?;
    let mut axiom = sys.axiom().clone();
    let mut lift = LetterMap::identity(sys.alphabet());
    for step in &chain {
        axiom = step.merge.apply(&axiom);
        lift = lift.after(&step.decode);
    }
    let final_system = D0LSystem::new(last, axiom)?;
    Ok(InjectiveSimplification {
        chain,
        final_system,
        lift,
    })
}
