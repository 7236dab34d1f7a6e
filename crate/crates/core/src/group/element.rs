use std::fmt;
use std::ops::Neg;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementError {
    #[error("{0:?} is not a permutation of 1..{1}")]
    NotABijection(Vec<usize>, usize),
    #[error("sign vector has length {got}, expected {expected}")]
    SignLength { got: usize, expected: usize },
    #[error("sign entries must be +1 or -1")]
    BadSign,
}

/// A signed permutation of `m` coordinates.
///
/// Acting on a point, coordinate `i` is first multiplied by `signs[i]` and then
/// moved to position `perm[i]`: `(w x)[perm[i]] = signs[i] * x[i]`. Plain
/// permutations (type A) have every sign `+1`. Indices are 0-based internally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(m: usize) -> Self {
        Self {
            perm: (0..m).collect(),
            signs: vec![1; m],
        }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, ElementError> {
        let m = perm.len();
        let mut seen = vec![false; m];
        for &p in &perm {
            if p >= m || seen[p] {
                return Err(ElementError::NotABijection(perm.iter().map(|p| p + 1).collect(), m));
            }
            seen[p] = true;
        }
        if signs.len() != m {
            return Err(ElementError::SignLength {
                got: signs.len(),
                expected: m,
            });
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(ElementError::BadSign);
        }
        Ok(Self { perm, signs })
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self, ElementError> {
        let m = perm.len();
        Self::new(perm, vec![1; m])
    }

    /// Swaps coordinates `i` and `j` (0-based).
    pub fn transposition(m: usize, i: usize, j: usize) -> Self {
        let mut w = Self::identity(m);
        w.perm.swap(i, j);
        w
    }

    /// Negates coordinate `i` (0-based).
    pub fn sign_change(m: usize, i: usize) -> Self {
        let mut w = Self::identity(m);
        w.signs[i] = -1;
        w
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn is_unsigned(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        let signs = other
            .perm
            .iter()
            .zip(&other.signs)
            .map(|(&p, &s)| self.signs[p] * s)
            .collect();
        Self { perm, signs }
    }

    pub fn inverse(&self) -> Self {
        let m = self.degree();
        let mut perm = vec![0; m];
        let mut signs = vec![1; m];
        for i in 0..m {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        Self { perm, signs }
    }

    /// `self * g * self^-1`.
    pub fn conjugate(&self, g: &Self) -> Self {
        self.compose(g).compose(&self.inverse())
    }

    /// Applies the element to a coordinate vector (points and hyperplane normals alike;
    /// signed permutations are orthogonal).
    pub fn apply<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Clone + Neg<Output = T>,
    {
        assert_eq!(x.len(), self.degree(), "dimension mismatch");
        let mut out: Vec<Option<T>> = vec![None; x.len()];
        for (i, v) in x.iter().enumerate() {
            out[self.perm[i]] = Some(if self.signs[i] < 0 { -v.clone() } else { v.clone() });
        }
        out.into_iter().map(|v| v.expect("perm is a bijection")).collect()
    }

    /// Number of cycles of the underlying permutation, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        let m = self.degree();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for s in 0..m {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i);
                i = self.perm[i];
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for SignedPerm {
    /// Cycle notation for plain permutations (`()` is the identity); signed
    /// one-line notation `[s_1 p(1), ...]` otherwise, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unsigned() {
            let mut any = false;
            for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
                any = true;
                let items: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "({})", items.join(" "))?;
            }
            if !any {
                write!(f, "()")?;
            }
            Ok(())
        } else {
            let items: Vec<String> = self
                .perm
                .iter()
                .zip(&self.signs)
                .map(|(&p, &s)| format!("{}{}", if s < 0 { "-" } else { "" }, p + 1))
                .collect();
            write!(f, "[{}]", items.join(","))
        }
    }
}
