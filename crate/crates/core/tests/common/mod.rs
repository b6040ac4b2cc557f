#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use d0l::{Alphabet, D0LSystem, Letter, Morphism, Word};
use rand::Rng;

pub fn fixture(name: &str) -> D0LSystem {
    let path = fixture_path(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    d0l::parse_system(&text).unwrap().system
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.d0l"))
}

pub fn word(sys: &D0LSystem, text: &str) -> Word {
    sys.parse_word(text).unwrap()
}

pub fn render(sys: &D0LSystem, w: &[Letter]) -> String {
    sys.render(w)
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// A nonerasing morphism on 1..=`max_letters` letters with images of length
/// 1..=`max_image`.
pub fn random_morphism(rng: &mut impl Rng, max_letters: usize, max_image: usize) -> Morphism {
    let n = rng.gen_range(1..=max_letters);
    let alphabet = Alphabet::new(NAMES[..n].iter().copied()).unwrap();
    let images = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_image);
            Word::from_letters((0..len).map(|_| Letter(rng.gen_range(0..n) as u32)).collect())
        })
        .collect();
    Morphism::new(alphabet, images).unwrap()
}

/// The system with axiom `a`, minus the letters it never reaches.
pub fn system_from(m: &Morphism) -> D0LSystem {
    D0LSystem::trimmed(m.clone(), Word::from_letters(vec![Letter(0)])).unwrap().0
}

/// All words of length 1..=`max_len` over `n` letters.
pub fn all_words(n: usize, max_len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut layer = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * n);
        for w in &layer {
            for a in 0..n {
                next.push(w.concat(&[Letter(a as u32)]));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A pair u ≠ v of words of length ≤ `max_len` with equal images, if any.
pub fn brute_force_collision(m: &Morphism, max_len: usize) -> Option<(Word, Word)> {
    let mut seen: HashMap<Word, Word> = HashMap::new();
    for w in all_words(m.size(), max_len) {
        let img = m.apply(&w);
        if let Some(prev) = seen.get(&img) {
            return Some((prev.clone(), w));
        }
        seen.insert(img, w);
    }
    None
}

/// Bounded iff the image length has stopped moving between |A| and 2|A|
/// steps, measured on the words themselves.
pub fn saturation_bounded(m: &Morphism) -> Vec<bool> {
    let n = m.size();
    m.alphabet()
        .letters()
        .map(|a| {
            let short = m.iterate(&[a], n).unwrap().len();
            let long = m.iterate(&[a], 2 * n).unwrap().len();
            short == long
        })
        .collect()
}
