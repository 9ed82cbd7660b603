//! Automorphisms of the complete `l`-ary rooted tree of height `n`, and the
//! per-level sign homomorphism.
//!
//! An automorphism is stored as a portrait: a sparse map from internal
//! vertices (words over `{0..l-1}` of length `< n`) to permutations of the
//! child slots. The image of a word is computed letter by letter, each letter
//! permuted by the label at the *input* prefix above it.

use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAut {
    ell: u32,
    n: u32,
    /// Non-identity labels only.
    labels: BTreeMap<Vec<u8>, Vec<u8>>,
}

fn is_permutation(perm: &[u8], ell: u32) -> bool {
    if perm.len() != ell as usize {
        return false;
    }
    let mut seen = vec![false; perm.len()];
    for &i in perm {
        if (i as usize) >= perm.len() || seen[i as usize] {
            return false;
        }
        seen[i as usize] = true;
    }
    true
}

fn is_identity(perm: &[u8]) -> bool {
    perm.iter().enumerate().all(|(i, &j)| i as u8 == j)
}

/// Sign of a permutation given as an image table: `(-1)^(points - cycles)`.
pub fn perm_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0usize;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    if (perm.len() - cycles) % 2 == 0 {
        1
    } else {
        -1
    }
}

impl TreeAut {
    pub fn identity(ell: u32, n: u32) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidTreeAut("arity must be at least 2".into()));
        }
        if n == 0 {
            return Err(Error::InvalidTreeAut("height must be at least 1".into()));
        }
        Ok(TreeAut { ell, n, labels: BTreeMap::new() })
    }

    pub fn new(ell: u32, n: u32, labels: BTreeMap<Vec<u8>, Vec<u8>>) -> Result<Self> {
        let mut t = TreeAut::identity(ell, n)?;
        for (word, perm) in labels {
            t.set_label(&word, perm)?;
        }
        Ok(t)
    }

    /// Replaces the label at `word` (identity permutations are erased).
    pub fn set_label(&mut self, word: &[u8], perm: Vec<u8>) -> Result<()> {
        if word.len() >= self.n as usize {
            return Err(Error::InvalidTreeAut(format!(
                "vertex word of length {} is not internal at height {}",
                word.len(),
                self.n
            )));
        }
        if word.iter().any(|&d| u32::from(d) >= self.ell) {
            return Err(Error::InvalidTreeAut("vertex word digit out of range".into()));
        }
        if !is_permutation(&perm, self.ell) {
            return Err(Error::InvalidTreeAut(format!(
                "label at {:?} is not a permutation of {} slots",
                word, self.ell
            )));
        }
        if is_identity(&perm) {
            self.labels.remove(word);
        } else {
            self.labels.insert(word.to_vec(), perm);
        }
        Ok(())
    }

    /// Builder form of `set_label`.
    pub fn with_label(mut self, word: &[u8], perm: Vec<u8>) -> Result<Self> {
        self.set_label(word, perm)?;
        Ok(self)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn height(&self) -> u32 {
        self.n
    }

    pub fn labels(&self) -> &BTreeMap<Vec<u8>, Vec<u8>> {
        &self.labels
    }

    fn label_image(&self, word: &[u8], digit: u8) -> u8 {
        match self.labels.get(word) {
            Some(perm) => perm[digit as usize],
            None => digit,
        }
    }

    /// Image of a word of length ≤ n.
    pub fn apply_word(&self, w: &[u8]) -> Vec<u8> {
        debug_assert!(w.len() <= self.n as usize);
        let mut out = Vec::with_capacity(w.len());
        for (k, &d) in w.iter().enumerate() {
            out.push(self.label_image(&w[..k], d));
        }
        out
    }

    /// The unique word mapping to `w`.
    pub fn invert_word(&self, w: &[u8]) -> Vec<u8> {
        debug_assert!(w.len() <= self.n as usize);
        let mut pre = Vec::with_capacity(w.len());
        for &d in w {
            let mut found = None;
            for i in 0..self.ell as u8 {
                if self.label_image(&pre, i) == d {
                    found = Some(i);
                    break;
                }
            }
            pre.push(found.expect("label is a permutation"));
        }
        pre
    }

    /// `self ∘ other`: apply `other` first. Labels compose as
    /// `π(u) = π_self(other(u)) ∘ π_other(u)`.
    pub fn compose(&self, other: &TreeAut) -> Result<TreeAut> {
        if self.ell != other.ell || self.n != other.n {
            return Err(Error::InvalidTreeAut(
                "cannot compose automorphisms of different trees".into(),
            ));
        }
        let mut vertices: Vec<Vec<u8>> = other.labels.keys().cloned().collect();
        for v in self.labels.keys() {
            vertices.push(other.invert_word(v));
        }
        vertices.sort();
        vertices.dedup();
        let mut out = TreeAut::identity(self.ell, self.n)?;
        for u in vertices {
            let image = other.apply_word(&u);
            let perm: Vec<u8> = (0..self.ell as u8)
                .map(|i| self.label_image(&image, other.label_image(&u, i)))
                .collect();
            out.set_label(&u, perm)?;
        }
        Ok(out)
    }

    /// Permutation induced on the `l^m` level-`m` vertices, indexed by the
    /// base-`l` value of their words (first letter most significant).
    pub fn leaf_action(&self, m: u32) -> Result<Vec<usize>> {
        if m < 1 || m > self.n {
            return Err(Error::Precondition(format!(
                "leaf_action level {} out of range 1..={}",
                m, self.n
            )));
        }
        let ell = self.ell as usize;
        let size = ell.pow(m);
        let mut out = vec![0usize; size];
        let mut word = vec![0u8; m as usize];
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut rem = idx;
            for k in (0..m as usize).rev() {
                word[k] = (rem % ell) as u8;
                rem /= ell;
            }
            let image = self.apply_word(&word);
            *slot = image.iter().fold(0usize, |acc, &d| acc * ell + d as usize);
        }
        Ok(out)
    }

    /// Component `m` is the sign of the induced level-`m` permutation.
    pub fn sgn_vector(&self) -> Vec<i8> {
        (1..=self.n)
            .map(|m| perm_sign(&self.leaf_action(m).unwrap()))
            .collect()
    }
}

/// An automorphism with the prescribed sign vector, built greedily: one child
/// transposition at the vertex `0^(m-1)` per level whose sign still needs a
/// flip. Such a transposition flips exactly the level-`m` sign and leaves
/// every level above `m` untouched, for any arity.
pub fn sign_preimage(target: &[i8], ell: u32) -> Result<TreeAut> {
    if target.is_empty() {
        return Err(Error::Precondition("empty sign target".into()));
    }
    if let Some(bad) = target.iter().find(|s| s.abs() != 1) {
        return Err(Error::Precondition(format!("sign entries must be ±1, got {bad}")));
    }
    let n = target.len() as u32;
    let mut t = TreeAut::identity(ell, n)?;
    for m in 1..=n {
        let sign = perm_sign(&t.leaf_action(m)?);
        if sign != target[(m - 1) as usize] {
            let mut swap: Vec<u8> = (0..ell as u8).collect();
            swap.swap(0, 1);
            let generator =
                TreeAut::identity(ell, n)?.with_label(&vec![0u8; (m - 1) as usize], swap)?;
            t = t.compose(&generator)?;
        }
    }
    Ok(t)
}

#[derive(Serialize, Deserialize)]
struct WireAut {
    ell: u32,
    n: u32,
    labels: BTreeMap<String, Vec<u8>>,
}

fn word_key(word: &[u8]) -> Option<String> {
    word.iter()
        .map(|&d| (d < 10).then(|| char::from(b'0' + d)))
        .collect()
}

impl Serialize for TreeAut {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut labels = BTreeMap::new();
        for (word, perm) in &self.labels {
            let key = word_key(word)
                .ok_or_else(|| S::Error::custom("arity above 10 has no digit-string keys"))?;
            labels.insert(key, perm.clone());
        }
        WireAut { ell: self.ell, n: self.n, labels }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TreeAut {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = WireAut::deserialize(d)?;
        let mut labels = BTreeMap::new();
        for (key, perm) in wire.labels {
            let word: Option<Vec<u8>> = key
                .chars()
                .map(|ch| ch.to_digit(10).map(|d| d as u8))
                .collect();
            let word = word.ok_or_else(|| D::Error::custom("vertex key must be a digit string"))?;
            labels.insert(word, perm);
        }
        TreeAut::new(wire.ell, wire.n, labels).map_err(D::Error::custom)
    }
}
