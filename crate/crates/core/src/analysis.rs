//! Orbit and isotropy data for one arrangement, computed from a full chamber enumeration.
//!
//! Orbits are indexed through the fundamental chamber `a0` of the Coxeter part
//! (all signs `+`, i.e. `x1 > x2 > ... > xm`, and `xm > 0` in type B). Because the
//! group acts simply transitively on `Ch(A)`, the chambers of `C` inside `a0` meet
//! every orbit exactly once, and their restrictions to the stable part give one
//! representative per orbit of `Ch(B)`.

use std::collections::HashMap;
use std::ops::Range;

use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::chambers::{enumerate_chambers, restrict_all, Chamber, SignVector};
use crate::exactmath::Rational;
use crate::group::{average_point, tau, ActionContext, Group, GroupError, OrbitPartition, Part, Subgroup, TauClass};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("the fundamental chamber of the Coxeter part was not found")]
    NoFundamentalChamber,
}

/// One orbit, described by its representative inside the fundamental chamber.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    /// Index into `chambers_c`.
    pub chamber: usize,
    /// Index into `chambers_b` of the restriction of `chamber`.
    pub stable_chamber: usize,
    /// `|O(b)|`.
    pub size: usize,
    pub stabilizer: Subgroup,
    /// `|phi_B^{-1}(b)|`.
    pub fiber_size: usize,
    /// The average of the witness of `chamber` over the stabilizer.
    pub invariant_point: Vec<Rational>,
}

pub struct Analysis {
    pub ctx: ActionContext,
    pub chambers_c: Vec<Chamber>,
    pub chambers_a: Vec<Chamber>,
    pub chambers_b: Vec<Chamber>,
    pub orbits_c: OrbitPartition,
    pub orbits_b: OrbitPartition,
    /// Index into `chambers_a` of the fundamental chamber.
    pub fundamental: usize,
    /// One record per orbit, sorted by the sign vector of the representative in `C`.
    pub orbits: Vec<OrbitRecord>,
    pub tau_classes: Vec<TauClass>,
}

impl Analysis {
    pub fn new(arr: &Arrangement) -> Result<Self, AnalysisError> {
        let chambers_c = enumerate_chambers(arr);
        Self::from_chambers(arr, chambers_c)
    }

    /// Builds the analysis from an already enumerated, sorted `Ch(C)`.
    pub fn from_chambers(arr: &Arrangement, chambers_c: Vec<Chamber>) -> Result<Self, AnalysisError> {
        let group = Group::new(arr.group_type(), arr.m());
        let ctx = ActionContext::new(arr.clone(), group)?;
        let chambers_a = dedup_restrictions(&chambers_c, arr.coxeter_range());
        let chambers_b = dedup_restrictions(&chambers_c, arr.stable_range());
        let orbits_c = ctx.orbits(&chambers_c, Part::Whole);
        let orbits_b = ctx.orbits(&chambers_b, Part::Stable);

        let a0 = SignVector::all_positive(arr.coxeter_range().len());
        let fundamental = chambers_a
            .iter()
            .position(|c| c.signs == a0)
            .ok_or(AnalysisError::NoFundamentalChamber)?;

        let b_index: HashMap<&SignVector, usize> = chambers_b.iter().enumerate().map(|(i, c)| (&c.signs, i)).collect();
        let fiber_sizes = fiber_sizes(&chambers_c, &chambers_b, arr.stable_range());

        let coxeter = arr.coxeter_range();
        let stable = arr.stable_range();
        let orbits: Vec<OrbitRecord> = (0..chambers_c.len())
            .filter(|&i| chambers_c[i].signs.slice(coxeter.clone()) == a0)
            .map(|i| {
                let b_signs = chambers_c[i].signs.slice(stable.clone());
                let stable_chamber = b_index[&b_signs];
                let stabilizer = ctx.stabilizer(&b_signs, Part::Stable);
                let invariant_point = average_point(&chambers_c[i].witness, &stabilizer);
                OrbitRecord {
                    chamber: i,
                    stable_chamber,
                    size: orbits_b.sizes[orbits_b.membership[stable_chamber]],
                    stabilizer,
                    fiber_size: fiber_sizes[stable_chamber],
                    invariant_point,
                }
            })
            .collect();
        let stabilizers: Vec<Subgroup> = orbits.iter().map(|o| o.stabilizer.clone()).collect();
        let tau_classes = tau(ctx.group(), &stabilizers);
        Ok(Self {
            ctx,
            chambers_c,
            chambers_a,
            chambers_b,
            orbits_c,
            orbits_b,
            fundamental,
            orbits,
            tau_classes,
        })
    }

    pub fn arrangement(&self) -> &Arrangement {
        self.ctx.arrangement()
    }

    pub fn group(&self) -> &Group {
        self.ctx.group()
    }

    /// `|phi_B^{-1}(b)|` for every chamber of `B`, in `chambers_b` order.
    pub fn stable_fiber_sizes(&self) -> Vec<usize> {
        fiber_sizes(&self.chambers_c, &self.chambers_b, self.arrangement().stable_range())
    }

    /// `|phi_A^{-1}(a)|` for every chamber of `A`, in `chambers_a` order.
    pub fn coxeter_fiber_sizes(&self) -> Vec<usize> {
        fiber_sizes(&self.chambers_c, &self.chambers_a, self.arrangement().coxeter_range())
    }
}

fn fiber_sizes(chambers_c: &[Chamber], targets: &[Chamber], range: Range<usize>) -> Vec<usize> {
    let index: HashMap<&SignVector, usize> = targets.iter().enumerate().map(|(i, c)| (&c.signs, i)).collect();
    let mut sizes = vec![0usize; targets.len()];
    for c in chambers_c {
        sizes[index[&c.signs.slice(range.clone())]] += 1;
    }
    sizes
}

/// Distinct restrictions, sorted by sign vector, each keeping the first witness seen.
fn dedup_restrictions(chambers: &[Chamber], range: Range<usize>) -> Vec<Chamber> {
    let mut out = restrict_all(chambers, range);
    out.sort_by(|a, b| a.signs.cmp(&b.signs));
    out.dedup_by(|a, b| a.signs == b.signs);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Family;

    #[test]
    fn catalan_three_records() {
        let arr = Family::Catalan.build(3).unwrap();
        let an = Analysis::new(&arr).unwrap();
        assert_eq!(an.chambers_c.len(), 30);
        assert_eq!(an.chambers_a.len(), 6);
        assert_eq!(an.chambers_b.len(), 19);
        assert_eq!(an.orbits.len(), 5);
        for o in &an.orbits {
            assert_eq!(o.fiber_size, o.stabilizer.order());
            assert_eq!(o.size * o.stabilizer.order(), 6);
        }
        assert_eq!(an.tau_classes.len(), 3);
    }

    #[test]
    fn signed_three_records() {
        let arr = Family::SignedAllSubset.build(3).unwrap();
        let an = Analysis::new(&arr).unwrap();
        assert_eq!(an.chambers_c.len(), 96);
        assert_eq!(an.chambers_b.len(), 14);
        let mut orders: Vec<usize> = an.orbits.iter().map(|o| o.stabilizer.order()).collect();
        orders.sort();
        assert_eq!(orders, vec![6, 8]);
    }
}
