//! Morphisms, D0L systems, the text format, iteration and the incidence matrix.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{valid_token, Alphabet, Letter, Word};

/// Default cap on the length of any word produced by iteration (2^20).
pub const DEFAULT_LENGTH_BUDGET: usize = 1 << 20;

/// An endomorphism of the free monoid over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            let missing = alphabet
                .names()
                .get(images.len())
                .cloned()
                .unwrap_or_default();
            return Err(Error::MissingImage(missing));
        }
        let n = alphabet.len() as u32;
        if images.iter().flat_map(|w| w.iter()).any(|a| a.0 >= n) {
            return Err(Error::Invariant("image uses a letter outside the alphabet".into()));
        }
        Ok(Morphism { alphabet, images })
    }

    /// Builds a morphism from `(letter, image)` pairs in alphabet order, with
    /// images written as in the system file format.
    pub fn from_rules(rules: &[(&str, &str)]) -> Result<Self> {
        let alphabet = Alphabet::new(rules.iter().map(|(a, _)| *a))?;
        let images = rules
            .iter()
            .map(|(_, img)| alphabet.parse_word(img))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a.index()]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    /// ‖φ‖, the longest image length.
    pub fn norm_max(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// |φ|, the shortest image length.
    pub fn norm_min(&self) -> usize {
        self.images.iter().map(|w| w.len()).min().unwrap_or(0)
    }

    pub fn is_nonerasing(&self) -> bool {
        self.norm_min() >= 1
    }

    /// Fails with [`Error::Erasing`] unless every image is non-empty.
    pub fn require_propagating(&self) -> Result<()> {
        match self.images.iter().position(|w| w.is_empty()) {
            Some(i) => Err(Error::Erasing(self.alphabet.names()[i].clone())),
            None => Ok(()),
        }
    }

    pub fn apply(&self, w: &[Letter]) -> Word {
        let mut out = Vec::new();
        for &a in w {
            out.extend_from_slice(self.image(a));
        }
        Word::from_letters(out)
    }

    pub fn apply_with_budget(&self, w: &[Letter], budget: usize) -> Result<Word> {
        let mut out = Vec::new();
        for &a in w {
            let img = self.image(a);
            if out.len() + img.len() > budget {
                return Err(Error::BudgetExceeded { limit: budget });
            }
            out.extend_from_slice(img);
        }
        Ok(Word::from_letters(out))
    }

    /// φⁿ(w), failing once an intermediate word exceeds `budget` symbols.
    pub fn iterate_with_budget(&self, w: &[Letter], n: usize, budget: usize) -> Result<Word> {
        if w.len() > budget {
            return Err(Error::BudgetExceeded { limit: budget });
        }
        let mut cur = Word::from(w);
        for _ in 0..n {
            cur = self.apply_with_budget(&cur, budget)?;
        }
        Ok(cur)
    }

    pub fn iterate(&self, w: &[Letter], n: usize) -> Result<Word> {
        self.iterate_with_budget(w, n, DEFAULT_LENGTH_BUDGET)
    }

    /// The morphism φⁿ.
    pub fn power(&self, n: usize) -> Result<Morphism> {
        let images = self
            .alphabet
            .letters()
            .map(|a| self.iterate(&[a], n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            alphabet: self.alphabet.clone(),
            images,
        })
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let n = self.size();
        let mut entries = vec![0u64; n * n];
        for (a, img) in self.images.iter().enumerate() {
            for &b in img.iter() {
                entries[a * n + b.index()] += 1;
            }
        }
        IncidenceMatrix { n, entries }
    }

    /// |φⁿ(a)| for every letter, via the length recursion. `None` on overflow.
    pub fn image_lengths(&self, n: usize) -> Option<Vec<u128>> {
        let mut lens = vec![1u128; self.size()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(lens.len());
            for img in &self.images {
                let mut s = 0u128;
                for &b in img.iter() {
                    s = s.checked_add(lens[b.index()])?;
                }
                next.push(s);
            }
            lens = next;
        }
        Some(lens)
    }

    /// Letters occurring in φ(a), without repetition, in first-occurrence order.
    pub fn successors(&self, a: Letter) -> Vec<Letter> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for &b in self.image(a).iter() {
            if !seen[b.index()] {
                seen[b.index()] = true;
                out.push(b);
            }
        }
        out
    }

    /// `reach[a][b]` is true iff b occurs in some φⁿ(a), n ≥ 0.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.size();
        let mut reach = vec![vec![false; n]; n];
        for a in self.alphabet.letters() {
            let mut stack = vec![a];
            reach[a.index()][a.index()] = true;
            while let Some(c) = stack.pop() {
                for d in self.successors(c) {
                    if !reach[a.index()][d.index()] {
                        reach[a.index()][d.index()] = true;
                        stack.push(d);
                    }
                }
            }
        }
        reach
    }

    /// Image map written as `a -> image` lines.
    pub fn rules_text(&self) -> String {
        let mut out = String::new();
        for a in self.alphabet.letters() {
            out.push_str(self.alphabet.name(a));
            out.push_str(" ->");
            for &b in self.image(a).iter() {
                out.push(' ');
                out.push_str(self.alphabet.name(b));
            }
            out.push('\n');
        }
        out
    }
}

/// Square matrix with `M[a][b]` = number of occurrences of b in φ(a).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IncidenceMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.entries[a * self.n + b]
    }

    pub fn row(&self, a: usize) -> &[u64] {
        &self.entries[a * self.n..(a + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|a| self.row(a).to_vec()).collect()
    }

    pub fn row_sum(&self, a: usize) -> u64 {
        self.row(a).iter().sum()
    }

    /// Matrix product; `None` on overflow.
    pub fn checked_mul(&self, other: &IncidenceMatrix) -> Option<IncidenceMatrix> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = other.get(k, j);
                    if y != 0 {
                        let e = &mut entries[i * n + j];
                        *e = e.checked_add(x.checked_mul(y)?)?;
                    }
                }
            }
        }
        Some(IncidenceMatrix { n, entries })
    }

    pub fn checked_pow(&self, k: usize) -> Option<IncidenceMatrix> {
        let mut acc = IncidenceMatrix::identity(self.n);
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IncidenceMatrix { n, entries }
    }

    /// Principal submatrix on the given indices (in the given order).
    pub fn restrict(&self, idx: &[usize]) -> IncidenceMatrix {
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        IncidenceMatrix::from_rows(rows)
    }
}

/// A D0L system: morphism plus a non-empty axiom over a minimal alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D0LSystem {
    morphism: Morphism,
    axiom: Word,
    erasing_allowed: bool,
}

/// Result of parsing: the system plus the names of letters dropped by the
/// minimal-alphabet rule.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub system: D0LSystem,
    pub trimmed: Vec<String>,
}

impl D0LSystem {
    /// Builds a system, rejecting empty axioms and letters that never occur
    /// in the language.
    pub fn new(morphism: Morphism, axiom: Word) -> Result<Self> {
        let (sys, trimmed) = Self::trimmed(morphism, axiom)?;
        if !trimmed.is_empty() {
            return Err(Error::Invariant(format!(
                "letters never occur in the language: {}",
                trimmed.join(" ")
            )));
        }
        Ok(sys)
    }

    /// Builds a system, dropping letters unreachable from the axiom.
    pub fn trimmed(morphism: Morphism, axiom: Word) -> Result<(Self, Vec<String>)> {
        if axiom.is_empty() {
            return Err(Error::EmptyAxiom);
        }
        let erasing_allowed = !morphism.is_nonerasing();
        let n = morphism.size();
        let mut used = vec![false; n];
        let mut stack: Vec<Letter> = Vec::new();
        for &a in axiom.iter() {
            if !used[a.index()] {
                used[a.index()] = true;
                stack.push(a);
            }
        }
        while let Some(c) = stack.pop() {
            for d in morphism.successors(c) {
                if !used[d.index()] {
                    used[d.index()] = true;
                    stack.push(d);
                }
            }
        }
        if used.iter().all(|&u| u) {
            return Ok((
                D0LSystem {
                    morphism,
                    axiom,
                    erasing_allowed,
                },
                Vec::new(),
            ));
        }
        let old = morphism.alphabet();
        let mut remap = vec![None; n];
        let mut names = Vec::new();
        let mut trimmed = Vec::new();
        for a in old.letters() {
            if used[a.index()] {
                remap[a.index()] = Some(Letter(names.len() as u32));
                names.push(old.name(a).to_string());
            } else {
                trimmed.push(old.name(a).to_string());
            }
        }
        let tr = |w: &Word| -> Word { w.iter().map(|a| remap[a.index()].unwrap()).collect() };
        let alphabet = Alphabet::new(names)?;
        let images = old
            .letters()
            .filter(|a| used[a.index()])
            .map(|a| tr(morphism.image(a)))
            .collect();
        let morphism = Morphism::new(alphabet, images)?;
        Ok((
            D0LSystem {
                morphism,
                axiom: tr(&axiom),
                erasing_allowed,
            },
            trimmed,
        ))
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.morphism.alphabet()
    }

    pub fn axiom(&self) -> &Word {
        &self.axiom
    }

    pub fn erasing_allowed(&self) -> bool {
        self.erasing_allowed
    }

    pub fn require_propagating(&self) -> Result<()> {
        self.morphism.require_propagating()
    }

    pub fn iterate(&self, w: &[Letter], n: usize) -> Result<Word> {
        self.morphism.iterate(w, n)
    }

    /// wᵢ = φⁱ(w₀).
    pub fn generation(&self, i: usize) -> Result<Word> {
        self.morphism.iterate(&self.axiom, i)
    }

    pub fn render(&self, w: &[Letter]) -> String {
        self.alphabet().render(w)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet().parse_word(text)
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        self.morphism.incidence_matrix()
    }

    /// Canonical text form; `parse_system` reads it back to an equal system.
    pub fn to_text(&self) -> String {
        let a = self.alphabet();
        let mut out = format!("alphabet: {}\n", a.names().join(" "));
        if self.erasing_allowed {
            out.push_str("erasing: allowed\n");
        }
        let axiom: Vec<&str> = self.axiom.iter().map(|&l| a.name(l)).collect();
        out.push_str(&format!("axiom: {}\n", axiom.join(" ")));
        out.push_str(&self.morphism.rules_text());
        out
    }
}

impl fmt::Display for D0LSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for D0LSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_system(s).map(|p| p.system)
    }
}

fn column_of(line: &str, chunk: &str) -> usize {
    let byte = chunk.as_ptr() as usize - line.as_ptr() as usize;
    line[..byte].chars().count() + 1
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokens_to_word(alphabet: &Alphabet, line: &str, text: &str, lineno: usize) -> Result<Word> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        if let Err((letter, offset)) = alphabet.push_chunk(chunk, &mut out) {
            return Err(Error::UnknownLetter {
                letter,
                line: lineno,
                column: column_of(line, chunk) + offset,
            });
        }
    }
    Ok(Word::from_letters(out))
}

/// Parses the system file format:
///
/// ```text
/// # comment
/// alphabet: a b c
/// axiom: a
/// a -> abca
/// b -> bc
/// c -> bc
/// ```
///
/// Letters unreachable from the axiom are dropped and reported in
/// [`Parsed::trimmed`].
pub fn parse_system(text: &str) -> Result<Parsed> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .collect();

    let mut alphabet: Option<Alphabet> = None;
    let mut erasing = false;
    for &(no, line) in &lines {
        let t = line.trim_start();
        if let Some(rest) = t.strip_prefix("alphabet:") {
            if alphabet.is_some() {
                return Err(syntax(no, column_of(line, t), "duplicate `alphabet:` line"));
            }
            let mut names = Vec::new();
            for tok in rest.split_whitespace() {
                if !valid_token(tok) {
                    return Err(syntax(no, column_of(line, tok), format!("invalid letter `{tok}`")));
                }
                if names.iter().any(|n| n == tok) {
                    return Err(syntax(no, column_of(line, tok), format!("duplicate letter `{tok}`")));
                }
                names.push(tok.to_string());
            }
            if names.is_empty() {
                return Err(syntax(no, column_of(line, t), "empty alphabet"));
            }
            alphabet = Some(Alphabet::new(names)?);
        } else if let Some(rest) = t.strip_prefix("erasing:") {
            match rest.trim() {
                "allowed" => erasing = true,
                "forbidden" => erasing = false,
                other => {
                    return Err(syntax(
                        no,
                        column_of(line, rest.trim_start()),
                        format!("expected `allowed` or `forbidden`, found `{other}`"),
                    ))
                }
            }
        }
    }
    let alphabet = alphabet.ok_or_else(|| syntax(1, 1, "missing `alphabet:` line"))?;

    let mut axiom: Option<Word> = None;
    let mut images: Vec<Option<Word>> = vec![None; alphabet.len()];
    for &(no, line) in &lines {
        let t = line.trim_start();
        if t.starts_with("alphabet:") || t.starts_with("erasing:") {
            continue;
        }
        if let Some(rest) = t.strip_prefix("axiom:") {
            if axiom.is_some() {
                return Err(syntax(no, column_of(line, t), "duplicate `axiom:` line"));
            }
            axiom = Some(tokens_to_word(&alphabet, line, rest, no)?);
        } else if let Some(arrow) = t.find("->") {
            let lhs = t[..arrow].trim();
            let rhs = &t[arrow + 2..];
            if lhs.is_empty() {
                return Err(syntax(no, column_of(line, t), "rule without a letter"));
            }
            let a = alphabet.get(lhs).ok_or_else(|| Error::UnknownLetter {
                letter: lhs.to_string(),
                line: no,
                column: column_of(line, t),
            })?;
            if images[a.index()].is_some() {
                return Err(syntax(no, column_of(line, t), format!("duplicate rule for `{lhs}`")));
            }
            let img = tokens_to_word(&alphabet, line, rhs, no)?;
            if img.is_empty() && !erasing {
                return Err(Error::ErasingRule(lhs.to_string()));
            }
            images[a.index()] = Some(img);
        } else {
            return Err(syntax(
                no,
                column_of(line, t),
                "expected `alphabet:`, `axiom:`, `erasing:` or a rule `x -> ...`",
            ));
        }
    }
    let axiom = axiom.ok_or_else(|| syntax(1, 1, "missing `axiom:` line"))?;
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::MissingImage(alphabet.names()[i].clone())))
        .collect::<Result<Vec<_>>>()?;
    let morphism = Morphism::new(alphabet, images)?;
    let (mut system, trimmed) = D0LSystem::trimmed(morphism, axiom)?;
    system.erasing_allowed = erasing;
    Ok(Parsed { system, trimmed })
}
