use std::collections::BTreeMap;

use super::{ArrowId, ArrowSet, FiniteGroupoid};
use crate::error::{Error, Result};
use crate::unitspace::{ClopenSet, Word};

/// A set of arrows on which source and range are both injective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    by_source: BTreeMap<Word, (ArrowId, Word)>,
    by_range: BTreeMap<Word, (ArrowId, Word)>,
    source_set: ClopenSet,
    range_set: ClopenSet,
}

impl Bisection {
    pub fn new(g: &FiniteGroupoid, arrows: impl IntoIterator<Item = ArrowId>) -> Result<Self> {
        let mut by_source: BTreeMap<Word, (ArrowId, Word)> = BTreeMap::new();
        let mut by_range: BTreeMap<Word, (ArrowId, Word)> = BTreeMap::new();
        for a in arrows {
            if a.index() >= g.arrow_count() {
                return Err(Error::Validation(format!("arrow {} does not exist", a.0)));
            }
            let (s, r) = (g.source(a), g.range(a));
            if let Some(&(b, _)) = by_source.get(&s) {
                if b == a {
                    continue;
                }
                return Err(Error::Validation(format!(
                    "not a bisection: arrows {} and {} share source {}",
                    b.0,
                    a.0,
                    g.space().format(s)
                )));
            }
            if let Some(&(b, _)) = by_range.get(&r) {
                return Err(Error::Validation(format!(
                    "not a bisection: arrows {} and {} share range {}",
                    b.0,
                    a.0,
                    g.space().format(r)
                )));
            }
            by_source.insert(s, (a, r));
            by_range.insert(r, (a, s));
        }
        let space = g.space();
        let source_set = ClopenSet::from_words(space, by_source.keys().copied())?;
        let range_set = ClopenSet::from_words(space, by_range.keys().copied())?;
        Ok(Bisection {
            by_source,
            by_range,
            source_set,
            range_set,
        })
    }

    /// The unit arrows over `set`.
    pub fn units_on(g: &FiniteGroupoid, set: &ClopenSet) -> Result<Self> {
        Self::new(g, set.iter().map(|x| g.unit(x)))
    }

    pub fn len(&self) -> usize {
        self.by_source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_source.is_empty()
    }

    /// Arrows in source order.
    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.by_source.values().map(|&(a, _)| a)
    }

    pub fn arrow_ids(&self) -> Vec<ArrowId> {
        let mut ids: Vec<ArrowId> = self.arrows().collect();
        ids.sort();
        ids
    }

    pub fn to_arrow_set(&self, arrow_count: usize) -> ArrowSet {
        ArrowSet::from_ids(arrow_count, self.arrows())
    }

    /// `s(V)`
    pub fn source_set(&self) -> &ClopenSet {
        &self.source_set
    }

    /// `r(V)`
    pub fn range_set(&self) -> &ClopenSet {
        &self.range_set
    }

    pub fn arrow_from(&self, x: Word) -> Option<ArrowId> {
        self.by_source.get(&x).map(|&(a, _)| a)
    }

    pub fn arrow_to(&self, y: Word) -> Option<ArrowId> {
        self.by_range.get(&y).map(|&(a, _)| a)
    }

    /// `θ_V(x)`, the range of the unique arrow of `V` with source `x`.
    pub fn theta_apply(&self, x: Word) -> Result<Word> {
        self.by_source
            .get(&x)
            .map(|&(_, r)| r)
            .ok_or_else(|| Error::Domain(format!("point {} is outside s(V)", self.source_set.space().format(x))))
    }

    /// `θ_V^-1(y)`.
    pub fn theta_inverse(&self, y: Word) -> Result<Word> {
        self.by_range
            .get(&y)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::Domain(format!("point {} is outside r(V)", self.range_set.space().format(y))))
    }

    /// `θ_V(W ∩ s(V))`.
    pub fn image(&self, w: &ClopenSet) -> ClopenSet {
        let mut out = ClopenSet::empty(self.range_set.space());
        for (x, &(_, r)) in &self.by_source {
            if w.contains(*x) {
                out.insert(r);
            }
        }
        out
    }

    /// `θ_V^-1(W ∩ r(V))`.
    pub fn preimage(&self, w: &ClopenSet) -> ClopenSet {
        let mut out = ClopenSet::empty(self.source_set.space());
        for (y, &(_, s)) in &self.by_range {
            if w.contains(*y) {
                out.insert(s);
            }
        }
        out
    }

    /// `V·W` restricted to `W ⊆ s(V)`.
    pub fn restrict_source(&self, w: &ClopenSet) -> Bisection {
        let by_source: BTreeMap<_, _> = self
            .by_source
            .iter()
            .filter(|(x, _)| w.contains(**x))
            .map(|(&x, &v)| (x, v))
            .collect();
        let by_range = by_source.iter().map(|(&x, &(a, r))| (r, (a, x))).collect();
        let mut source_set = ClopenSet::empty(self.source_set.space());
        let mut range_set = ClopenSet::empty(self.range_set.space());
        for (&x, &(_, r)) in &by_source {
            source_set.insert(x);
            range_set.insert(r);
        }
        Bisection {
            by_source,
            by_range,
            source_set,
            range_set,
        }
    }

    /// `V^-1`.
    pub fn inverse(&self, g: &FiniteGroupoid) -> Bisection {
        Bisection::new(g, self.arrows().map(|a| g.inverse(a))).expect("inverse of a bisection is a bisection")
    }

    /// The product bisection `VW = {vw : s(v) = r(w)}`.
    pub fn compose(&self, g: &FiniteGroupoid, w: &Bisection) -> Bisection {
        let arrows = w
            .by_source
            .values()
            .filter_map(|&(b, r)| self.arrow_from(r).map(|a| g.compose(a, b).expect("composable")));
        Bisection::new(g, arrows).expect("product of bisections is a bisection")
    }
}

/// Splits `D` into pairwise disjoint bisections: arrows are grouped by germ
/// label (groups ordered by first arrow id), and each group is split greedily
/// in arrow-id order.
pub fn decompose_into_bisections(g: &FiniteGroupoid, d: &ArrowSet) -> Vec<Bisection> {
    let mut group_of_label: BTreeMap<u32, usize> = BTreeMap::new();
    let mut groups: Vec<Vec<ArrowId>> = Vec::new();
    for a in d.iter() {
        let next = groups.len();
        let gi = *group_of_label.entry(g.label(a)).or_insert(next);
        if gi == groups.len() {
            groups.push(Vec::new());
        }
        groups[gi].push(a);
    }
    let n_points = g.space().len();
    let mut out = Vec::new();
    for group in groups {
        let mut pieces: Vec<(Vec<ArrowId>, Vec<bool>, Vec<bool>)> = Vec::new();
        for a in group {
            let (s, r) = (g.source(a).index(), g.range(a).index());
            match pieces.iter_mut().find(|p| !p.1[s] && !p.2[r]) {
                Some(p) => {
                    p.0.push(a);
                    p.1[s] = true;
                    p.2[r] = true;
                }
                None => {
                    let mut used_s = vec![false; n_points];
                    let mut used_r = vec![false; n_points];
                    used_s[s] = true;
                    used_r[r] = true;
                    pieces.push((vec![a], used_s, used_r));
                }
            }
        }
        for (arrows, _, _) in pieces {
            out.push(Bisection::new(g, arrows).expect("greedy pieces are bisections"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{build_from_spec, odometer_spec, GroupoidSpec, Limits, Mode};

    fn odometer() -> FiniteGroupoid {
        build_from_spec(&GroupoidSpec::Transformation(odometer_spec(3, Mode::Full)), &Limits::default()).unwrap()
    }

    fn plus_one(g: &FiniteGroupoid) -> Bisection {
        let arrows = g.arrows().filter(|&a| g.range(a).0 == (g.source(a).0 + 1) % 8);
        Bisection::new(g, arrows).unwrap()
    }

    #[test]
    fn odometer_plus_one_theta() {
        let g = odometer();
        let s = g.space().clone();
        let v = plus_one(&g);
        assert_eq!(s.format(v.theta_apply(s.parse_word("011").unwrap()).unwrap()), "100");
        assert_eq!(s.format(v.theta_apply(s.parse_word("111").unwrap()).unwrap()), "000");
        for x in v.source_set().iter() {
            assert_eq!(v.theta_inverse(v.theta_apply(x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn identity_bisection_on_a_set() {
        let g = odometer();
        let a = ClopenSet::parse_expr(g.space(), "[01]").unwrap();
        let v = Bisection::units_on(&g, &a).unwrap();
        for x in a.iter() {
            assert_eq!(v.theta_apply(x).unwrap(), x);
        }
        let outside = g.space().parse_word("111").unwrap();
        assert!(matches!(v.theta_apply(outside), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_non_bisections() {
        let g = odometer();
        let x = g.space().parse_word("000").unwrap();
        let fiber = g.source_fiber(x);
        assert!(matches!(Bisection::new(&g, fiber[..2].to_vec()), Err(Error::Validation(_))));
    }

    #[test]
    fn decomposition_of_odometer() {
        let g = odometer();
        let all = g.full_set();
        let parts = decompose_into_bisections(&g, &all);
        assert_eq!(parts.len(), 8);
        assert!(parts.iter().all(|b| b.len() == 8));
        assert_eq!(decompose_into_bisections(&g, &g.unit_set()).len(), 1);
        let one = ArrowSet::from_ids(64, [ArrowId(17)]);
        let single = decompose_into_bisections(&g, &one);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].arrow_ids(), vec![ArrowId(17)]);
    }

    #[test]
    fn compose_and_restrict() {
        let g = odometer();
        let v = plus_one(&g);
        let vv = v.compose(&g, &v);
        let s = g.space();
        assert_eq!(s.format(vv.theta_apply(s.parse_word("110").unwrap()).unwrap()), "000");
        let w = ClopenSet::parse_expr(s, "[1]").unwrap();
        let r = v.restrict_source(&w);
        assert_eq!(r.len(), 4);
        assert_eq!(r.source_set(), &w);
        let inv = v.inverse(&g);
        assert_eq!(inv.compose(&g, &v).arrow_ids(), {
            let mut u: Vec<ArrowId> = s.points().map(|x| g.unit(x)).collect();
            u.sort();
            u
        });
        assert_eq!(v.image(&w), ClopenSet::parse_expr(s, "{101,110,111,000}").unwrap());
        assert_eq!(v.preimage(&v.image(&w)), w);
    }
}
