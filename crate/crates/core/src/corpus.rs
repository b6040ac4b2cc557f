//! Brute-force factor corpora.
//!
//! `F_k` is the set of factors of length ≤ L of w₀, …, w_k. Because φ is
//! nonerasing, every factor of length ≤ L of w_{k+1} lies in φ(x) for a
//! factor x of w_k of length ≤ L whose first letter's image contains the
//! factor's start. So `F_{k+1}` only needs the images of the factors that
//! were new in `F_k`, and an idle generation is an exact fixpoint: the
//! corpus then equals the set of all factors of length ≤ L of the language.

use std::collections::{BTreeMap, HashSet};

use crate::circularity::sync_report;
use crate::error::Result;
use crate::system::D0LSystem;
use crate::word::{minimal_period, Letter, Word};

#[derive(Debug, Clone)]
pub struct FactorCorpus {
    system: D0LSystem,
    max_len: usize,
    generation: usize,
    stable: bool,
    set: HashSet<Word>,
    /// `by_len[n]`: factors of length n, sorted.
    by_len: Vec<Vec<Word>>,
}

fn insert_factors(w: &[Letter], starts: usize, max_len: usize, set: &mut HashSet<Word>, fresh: &mut Vec<Word>) {
    for i in 0..starts.min(w.len()) {
        for n in 1..=max_len.min(w.len() - i) {
            let f = &w[i..i + n];
            if !set.contains(f) {
                let f = Word::from(f);
                set.insert(f.clone());
                fresh.push(f);
            }
        }
    }
}

impl std::borrow::Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        self
    }
}

impl FactorCorpus {
    /// Factors of length ≤ `max_len` of w₀, …, w_g where g is the first
    /// idle generation, or `generations` if that comes first.
    pub fn build(sys: &D0LSystem, max_len: usize, generations: usize) -> Result<Self> {
        sys.require_propagating()?;
        let m = sys.morphism();
        let mut set = HashSet::new();
        let mut frontier = Vec::new();
        insert_factors(sys.axiom(), usize::MAX, max_len, &mut set, &mut frontier);
        let mut generation = 0;
        let mut stable = false;
        while generation < generations {
            let mut next = Vec::new();
            for x in &frontier {
                let img = m.apply(x);
                insert_factors(&img, m.image(x[0]).len(), max_len, &mut set, &mut next);
            }
            if next.is_empty() {
                stable = true;
                break;
            }
            frontier = next;
            generation += 1;
        }
        let mut by_len = vec![Vec::new(); max_len + 1];
        for f in &set {
            by_len[f.len()].push(f.clone());
        }
        for bucket in &mut by_len {
            bucket.sort();
        }
        Ok(FactorCorpus {
            system: sys.clone(),
            max_len,
            generation,
            stable,
            set,
            by_len,
        })
    }

    pub fn system(&self) -> &D0LSystem {
        &self.system
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of generations folded in.
    pub fn generation(&self) -> usize {
        self.generation
    }

    /// True iff the last generation added nothing, so the corpus is exactly
    /// the set of language factors up to `max_len`.
    pub fn is_stable(&self) -> bool {
        self.stable
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.set.contains(w)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn of_len(&self, n: usize) -> &[Word] {
        self.by_len.get(n).map_or(&[], Vec::as_slice)
    }

    /// All factors ordered by (length, letter order).
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Word> {
        self.by_len.iter().flatten()
    }

    /// Newline-delimited dump in (length, letter order) order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for f in self.iter() {
            out.push_str(&self.system.render(f));
            out.push('\n');
        }
        out
    }

    /// Largest k with a non-empty wᵏ in the corpus; the base is the first
    /// primitive root found in (length, letter order).
    pub fn max_power(&self) -> (usize, Word) {
        let mut best = (0, Word::new());
        for f in self.iter() {
            let p = minimal_period(f);
            if f.len() % p == 0 && f.len() / p > best.0 {
                best = (f.len() / p, Word::from(&f[..p]));
            }
        }
        best
    }

    /// Every unordered pair u < v of factors with φ(u) = φ(v), longest
    /// preimage first, then in letter order.
    pub fn collision_search(&self) -> Vec<(Word, Word)> {
        let m = self.system.morphism();
        let mut groups: BTreeMap<Word, Vec<&Word>> = BTreeMap::new();
        for f in self.iter() {
            groups.entry(m.apply(f)).or_default().push(f);
        }
        let mut pairs = Vec::new();
        for group in groups.values() {
            for (i, u) in group.iter().enumerate() {
                for v in &group[i + 1..] {
                    let (u, v) = if u <= v { (u, v) } else { (v, u) };
                    pairs.push(((*u).clone(), (*v).clone()));
                }
            }
        }
        pairs.sort_by(|a, b| {
            let la = a.0.len().max(a.1.len());
            let lb = b.0.len().max(b.1.len());
            lb.cmp(&la).then_with(|| a.cmp(b))
        });
        pairs
    }

    /// The longest factor without a synchronizing point (first in letter
    /// order among those of that length).
    pub fn nonsync_witness_search(&self) -> Result<Option<Word>> {
        for n in (1..=self.max_len).rev() {
            for f in self.of_len(n) {
                if sync_report(f, self)?.sync_positions.is_empty() {
                    return Ok(Some(f.clone()));
                }
            }
        }
        Ok(None)
    }
}
