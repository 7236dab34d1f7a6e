//! Coxeter groups of types A and B as signed permutations, and their actions
//! on points, hyperplanes and chambers.

mod action;
mod element;

use std::collections::{BTreeSet, VecDeque};

pub use crate::arrangement::GroupType;
pub use action::*;
pub use element::{ElementError, SignedPerm};

/// Largest group materialized by direct enumeration: `|B_6| = 2^6 * 6!`.
pub const EXHAUSTIVE_LIMIT: usize = 64 * 720;

/// A Coxeter group `W` of type A (acting on `m` coordinates as `S_m`) or type B.
#[derive(Clone, Debug)]
pub struct Group {
    kind: GroupType,
    m: usize,
    generators: Vec<SignedPerm>,
    elements: Vec<SignedPerm>,
}

impl Group {
    /// Materializes `W` by enumeration when it is small enough, by generator closure otherwise.
    pub fn new(kind: GroupType, m: usize) -> Self {
        let small = kind.order(m) <= num_bigint::BigInt::from(EXHAUSTIVE_LIMIT);
        if small {
            Self::exhaustive(kind, m)
        } else {
            Self::by_closure(kind, m)
        }
    }

    /// Every permutation (with every sign pattern for type B), sorted.
    pub fn exhaustive(kind: GroupType, m: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for n in 0..m {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..=n).map(move |pos| {
                        let mut q = p.clone();
                        q.insert(pos, n);
                        q
                    })
                })
                .collect();
        }
        let masks: u64 = match kind {
            GroupType::A => 1,
            GroupType::B => 1 << m,
        };
        let mut elements = Vec::with_capacity(perms.len() * masks as usize);
        for p in perms {
            for mask in 0..masks {
                let signs = (0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                elements.push(SignedPerm::new(p.clone(), signs).expect("valid by construction"));
            }
        }
        elements.sort();
        Self {
            kind,
            m,
            generators: kind.generators(m),
            elements,
        }
    }

    /// Breadth-first closure of the simple generators, sorted.
    pub fn by_closure(kind: GroupType, m: usize) -> Self {
        let generators = kind.generators(m);
        let mut seen = BTreeSet::new();
        let id = SignedPerm::identity(m);
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for g in &generators {
                let next = g.compose(&w);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Self {
            kind,
            m,
            generators,
            elements: seen.into_iter().collect(),
        }
    }

    pub fn kind(&self) -> GroupType {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[SignedPerm] {
        &self.generators
    }

    /// All elements in sorted order.
    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn identity(&self) -> SignedPerm {
        SignedPerm::identity(self.m)
    }
}

/// A subgroup given by its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<SignedPerm>,
}

impl Subgroup {
    /// Sorts and deduplicates; closure is the caller's responsibility (see [`Subgroup::is_closed`]).
    pub fn from_elements(mut elements: Vec<SignedPerm>) -> Self {
        elements.sort();
        elements.dedup();
        Self { elements }
    }

    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, w: &SignedPerm) -> bool {
        self.elements.binary_search(w).is_ok()
    }

    /// Contains the identity and is closed under composition and inverses.
    pub fn is_closed(&self) -> bool {
        let Some(first) = self.elements.first() else {
            return false;
        };
        self.contains(&SignedPerm::identity(first.degree()))
            && self.elements.iter().all(|g| self.contains(&g.inverse()))
            && self
                .elements
                .iter()
                .all(|g| self.elements.iter().all(|h| self.contains(&g.compose(h))))
    }

    /// `w S w^-1`.
    pub fn conjugate_by(&self, w: &SignedPerm) -> Subgroup {
        Subgroup::from_elements(self.elements.iter().map(|g| w.conjugate(g)).collect())
    }

    /// Elements rendered in cycle or signed one-line notation, in sorted order.
    pub fn label(&self) -> Vec<String> {
        self.elements.iter().map(ToString::to_string).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(Group::new(GroupType::A, 3).order(), 6);
        assert_eq!(Group::new(GroupType::A, 4).order(), 24);
        assert_eq!(Group::new(GroupType::B, 3).order(), 48);
        assert_eq!(Group::new(GroupType::B, 2).order(), 8);
    }

    #[test]
    fn closure_agrees_with_enumeration() {
        for (kind, m) in [(GroupType::A, 4), (GroupType::A, 3), (GroupType::B, 3)] {
            assert_eq!(
                Group::exhaustive(kind, m).elements(),
                Group::by_closure(kind, m).elements()
            );
        }
    }

    #[test]
    fn whole_group_is_a_subgroup() {
        let g = Group::new(GroupType::B, 2);
        let s = Subgroup::from_elements(g.elements().to_vec());
        assert!(s.is_closed());
        let t = Subgroup::from_elements(vec![SignedPerm::transposition(2, 0, 1)]);
        assert!(!t.is_closed());
    }
}
