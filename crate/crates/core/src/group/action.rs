use std::collections::HashMap;
use std::ops::Range;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use super::{Group, GroupType, SignedPerm, Subgroup};
use crate::arrangement::Arrangement;
use crate::chambers::{Chamber, SignVector};
use crate::exactmath::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element {0} moves a hyperplane outside the arrangement")]
    NotStable(String),
    #[error("element {0} mixes the Coxeter and stable parts")]
    MixesParts(String),
    #[error("Young subgroups are defined for type A only")]
    NotTypeA,
}

/// Which hyperplanes a sign vector is indexed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    /// All of `C = A ∪ B`.
    Whole,
    /// The Coxeter part `A`.
    Coxeter,
    /// The stable part `B`.
    Stable,
}

impl Part {
    pub fn range(&self, arr: &Arrangement) -> Range<usize> {
        match self {
            Part::Whole => 0..arr.len(),
            Part::Coxeter => arr.coxeter_range(),
            Part::Stable => arr.stable_range(),
        }
    }
}

/// How one group element permutes the hyperplanes: position `i` goes to
/// `targets[i].0`, and the sign at that position flips unless `targets[i].1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneAction {
    targets: Vec<(usize, bool)>,
}

impl HyperplaneAction {
    pub fn new(w: &SignedPerm, arr: &Arrangement) -> Result<Self, GroupError> {
        let targets = arr
            .hyperplane_action(w)
            .ok_or_else(|| GroupError::NotStable(w.to_string()))?;
        let split = arr.coxeter_part().len();
        if targets
            .iter()
            .enumerate()
            .any(|(i, &(j, _))| (i < split) != (j < split))
        {
            return Err(GroupError::MixesParts(w.to_string()));
        }
        Ok(Self { targets })
    }

    pub fn targets(&self) -> &[(usize, bool)] {
        &self.targets
    }

    /// Image of a sign vector indexed by the positions in `range`.
    pub fn apply(&self, signs: &SignVector, range: &Range<usize>) -> SignVector {
        let mut out = SignVector::all_positive(signs.len());
        for (k, i) in range.clone().enumerate() {
            let (j, kept) = self.targets[i];
            let negative = signs.is_positive(k) != kept;
            out.set(j - range.start, negative);
        }
        out
    }
}

/// Image of a chamber of the whole arrangement: `w` applied to the witness, signs rearranged.
pub fn act_on_chamber(w: &SignedPerm, ch: &Chamber, arr: &Arrangement) -> Result<Chamber, GroupError> {
    let action = HyperplaneAction::new(w, arr)?;
    Ok(Chamber {
        signs: action.apply(&ch.signs, &Part::Whole.range(arr)),
        witness: w.apply(&ch.witness),
    })
}

/// The group together with its action on the hyperplanes of one arrangement.
pub struct ActionContext {
    arr: Arrangement,
    group: Group,
    generator_actions: Vec<HyperplaneAction>,
    element_actions: Vec<HyperplaneAction>,
}

impl ActionContext {
    pub fn new(arr: Arrangement, group: Group) -> Result<Self, GroupError> {
        let generator_actions = group
            .generators()
            .iter()
            .map(|g| HyperplaneAction::new(g, &arr))
            .collect::<Result<_, _>>()?;
        let element_actions = group
            .elements()
            .par_iter()
            .map(|w| HyperplaneAction::new(w, &arr))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            arr,
            group,
            generator_actions,
            element_actions,
        })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arr
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Action of `group.elements()[i]`.
    pub fn element_action(&self, i: usize) -> &HyperplaneAction {
        &self.element_actions[i]
    }

    pub fn act(&self, element: usize, signs: &SignVector, part: Part) -> SignVector {
        self.element_actions[element].apply(signs, &part.range(&self.arr))
    }

    /// Orbits by breadth-first closure under the generators.
    pub fn orbits(&self, chambers: &[Chamber], part: Part) -> OrbitPartition {
        let range = part.range(&self.arr);
        let index: HashMap<&SignVector, usize> = chambers.iter().enumerate().map(|(i, c)| (&c.signs, i)).collect();
        let mut membership = vec![usize::MAX; chambers.len()];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        for start in 0..chambers.len() {
            if membership[start] != usize::MAX {
                continue;
            }
            let orbit = representatives.len();
            representatives.push(start);
            membership[start] = orbit;
            let mut queue = vec![start];
            let mut size = 0;
            while let Some(i) = queue.pop() {
                size += 1;
                for g in &self.generator_actions {
                    let img = g.apply(&chambers[i].signs, &range);
                    let j = *index.get(&img).expect("chamber list is closed under the action");
                    if membership[j] == usize::MAX {
                        membership[j] = orbit;
                        queue.push(j);
                    }
                }
            }
            sizes.push(size);
        }
        OrbitPartition {
            representatives,
            membership,
            sizes,
        }
    }

    /// `W_b = { w : w b = b }`.
    pub fn stabilizer(&self, signs: &SignVector, part: Part) -> Subgroup {
        let range = part.range(&self.arr);
        let elements = self
            .element_actions
            .par_iter()
            .zip(self.group.elements().par_iter())
            .filter(|(a, _)| &a.apply(signs, &range) == signs)
            .map(|(_, w)| w.clone())
            .collect();
        Subgroup::from_elements(elements)
    }

    /// Chambers in `chambers` fixed by element `i`.
    pub fn fix_count(&self, element: usize, chambers: &[Chamber], part: Part) -> usize {
        let range = part.range(&self.arr);
        let a = &self.element_actions[element];
        chambers.iter().filter(|c| a.apply(&c.signs, &range) == c.signs).count()
    }

    /// Checks `sum_w Fix(w, Ch(B)) = |Ch(C)|`.
    pub fn verify_fix_identity(&self, chambers_b: &[Chamber], chamber_count_c: usize) -> FixReport {
        let per_element: Vec<usize> = (0..self.group.order())
            .into_par_iter()
            .map(|i| self.fix_count(i, chambers_b, Part::Stable))
            .collect();
        let total = per_element.iter().sum();
        FixReport {
            per_element,
            total,
            expected: chamber_count_c,
        }
    }

    /// Orbits of the group on the hyperplanes of one part.
    pub fn hyperplane_orbits(&self, part: Part) -> Vec<Vec<usize>> {
        let range = part.range(&self.arr);
        let mut seen = vec![false; self.arr.len()];
        let mut out = Vec::new();
        for start in range {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < orbit.len() {
                for g in &self.generator_actions {
                    let (j, _) = g.targets[orbit[i]];
                    if !seen[j] {
                        seen[j] = true;
                        orbit.push(j);
                    }
                }
                i += 1;
            }
            orbit.sort();
            out.push(orbit);
        }
        out
    }
}

/// Orbits of a chamber list: representative index, orbit id per chamber, orbit sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub representatives: Vec<usize>,
    pub membership: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl OrbitPartition {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    pub fn members(&self, orbit: usize) -> Vec<usize> {
        (0..self.membership.len())
            .filter(|&i| self.membership[i] == orbit)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixReport {
    /// Fixed-chamber count for each element, in group element order.
    pub per_element: Vec<usize>,
    pub total: usize,
    pub expected: usize,
}

impl FixReport {
    pub fn holds(&self) -> bool {
        self.total == self.expected
    }
}

/// `z(x) = (1/|S|) sum_{w in S} w x`.
pub fn average_point(x: &[Rational], stab: &Subgroup) -> Vec<Rational> {
    let mut acc = vec![Rational::from_integer(BigInt::from(0)); x.len()];
    for w in stab.elements() {
        for (a, v) in acc.iter_mut().zip(w.apply(x)) {
            *a += v;
        }
    }
    let n = Rational::from_integer(BigInt::from(stab.order()));
    acc.into_iter().map(|a| a / &n).collect()
}

/// Elements of `group` fixing the point `x`.
pub fn point_stabilizer(group: &Group, x: &[Rational]) -> Subgroup {
    Subgroup::from_elements(group.elements().iter().filter(|w| w.apply(x) == x).cloned().collect())
}

/// Block sizes of equal values of `z`, sorted in decreasing order of value.
pub fn young_composition(z: &[Rational]) -> Vec<usize> {
    let mut sorted: Vec<&Rational> = z.iter().collect();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut out: Vec<usize> = Vec::new();
    for (i, v) in sorted.iter().enumerate() {
        if i > 0 && sorted[i - 1] == *v {
            *out.last_mut().expect("nonempty") += 1;
        } else {
            out.push(1);
        }
    }
    out
}

/// The Young subgroup permuting coordinates within blocks of equal value of `z`.
pub fn stabilizer_from_average(kind: GroupType, z: &[Rational]) -> Result<Subgroup, GroupError> {
    if kind != GroupType::A {
        return Err(GroupError::NotTypeA);
    }
    let m = z.len();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..m {
        match blocks.iter_mut().find(|b| z[b[0]] == z[i]) {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    let mut elements = vec![SignedPerm::identity(m)];
    for block in &blocks {
        let mut next = Vec::new();
        for arrangement in permutations_of(block) {
            let mut perm: Vec<usize> = (0..m).collect();
            for (from, to) in block.iter().zip(&arrangement) {
                perm[*from] = *to;
            }
            let local = SignedPerm::from_perm(perm).expect("block permutation");
            next.extend(elements.iter().map(|w| local.compose(w)));
        }
        elements = next;
    }
    Ok(Subgroup::from_elements(elements))
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations_of(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Orbits grouped by the conjugacy class of their stabilizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauClass {
    /// Stabilizer of the first orbit in the class; its sorted element list labels the class.
    pub representative: Subgroup,
    pub orbits: Vec<usize>,
}

impl TauClass {
    pub fn label(&self) -> Vec<String> {
        self.representative.label()
    }
}

/// Sends each orbit to the conjugacy class `[W_b]` of its stabilizer; classes are
/// listed in order of first appearance.
pub fn tau(group: &Group, stabilizers: &[Subgroup]) -> Vec<TauClass> {
    let mut classes: Vec<TauClass> = Vec::new();
    for (orbit, s) in stabilizers.iter().enumerate() {
        let found = classes.iter_mut().find(|c| {
            c.representative.order() == s.order()
                && group.elements().iter().any(|w| &c.representative.conjugate_by(w) == s)
        });
        match found {
            Some(c) => c.orbits.push(orbit),
            None => classes.push(TauClass {
                representative: s.clone(),
                orbits: vec![orbit],
            }),
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Family;
    use crate::chambers::{chambers_of_stable_part, enumerate_chambers};
    use crate::exactmath::rational_int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rational_int(x)).collect()
    }

    #[test]
    fn catalan_three_orbits() {
        let arr = Family::Catalan.build(3).unwrap();
        let group = Group::new(GroupType::A, 3);
        let ctx = ActionContext::new(arr.clone(), group.clone()).unwrap();
        let ch = enumerate_chambers(&arr);
        let oc = ctx.orbits(&ch, Part::Whole);
        assert_eq!(oc.count(), 5);
        assert!(oc.sizes.iter().all(|&s| s == 6));
        let chb = chambers_of_stable_part(&ch, &arr);
        let ob = ctx.orbits(&chb, Part::Stable);
        let mut sizes = ob.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 3, 6, 6]);
        let report = ctx.verify_fix_identity(&chb, ch.len());
        assert!(report.holds());
        assert_eq!(report.total, 30);
    }

    #[test]
    fn act_on_chamber_matches_point_location() {
        let arr = Family::Catalan.build(3).unwrap();
        let ch = enumerate_chambers(&arr);
        for w in Group::new(GroupType::A, 3).elements() {
            for c in &ch {
                let img = act_on_chamber(w, c, &arr).unwrap();
                let located = crate::chambers::chamber_of_point(&arr, &img.witness).unwrap();
                assert_eq!(img.signs, located.signs);
            }
        }
    }

    #[test]
    fn signed_three_stable_orbits() {
        let arr = Family::SignedAllSubset.build(3).unwrap();
        let group = Group::new(GroupType::B, 3);
        let ctx = ActionContext::new(arr.clone(), group.clone()).unwrap();
        let chb = chambers_of_stable_part(&enumerate_chambers(&arr), &arr);
        assert_eq!(chb.len(), 14);
        let mut sizes = ctx.orbits(&chb, Part::Stable).sizes;
        sizes.sort();
        assert_eq!(sizes, vec![6, 8]);
    }

    #[test]
    fn young_subgroups() {
        let s = stabilizer_from_average(GroupType::A, &ints(&[1, 1, -2])).unwrap();
        assert_eq!(s.order(), 2);
        assert!(s.is_closed());
        assert_eq!(young_composition(&ints(&[1, 1, -2])), vec![2, 1]);
        assert_eq!(
            stabilizer_from_average(GroupType::A, &ints(&[0, 0, 0]))
                .unwrap()
                .order(),
            6
        );
        let s = stabilizer_from_average(GroupType::A, &ints(&[3, -1, -1, -1])).unwrap();
        assert_eq!(s.order(), 6);
        assert_eq!(
            s,
            point_stabilizer(&Group::new(GroupType::A, 4), &ints(&[3, -1, -1, -1]))
        );
        assert!(stabilizer_from_average(GroupType::B, &ints(&[0, 0])).is_err());
    }

    #[test]
    fn average_of_trivial_stabilizer() {
        let x = ints(&[2, 1, -3]);
        let trivial = Subgroup::from_elements(vec![SignedPerm::identity(3)]);
        assert_eq!(average_point(&x, &trivial), x);
    }

    #[test]
    fn hyperplane_orbit_counts() {
        for (f, m, want) in [
            (Family::RestrictedAllSubset, 4, 2),
            (Family::RestrictedAllSubset, 5, 2),
            (Family::RestrictedAllSubset, 6, 3),
            (Family::UnrestrictedAllSubset, 4, 4),
            (Family::SignedAllSubset, 5, 3),
            (Family::Catalan, 4, 1),
            (Family::MidHyperplane, 5, 1),
        ] {
            let arr = f.build(m).unwrap();
            let group = Group::new(f.group_type(), m);
            let ctx = ActionContext::new(arr.clone(), group.clone()).unwrap();
            assert_eq!(ctx.hyperplane_orbits(Part::Stable).len(), want, "{f} m={m}");
        }
    }
}
