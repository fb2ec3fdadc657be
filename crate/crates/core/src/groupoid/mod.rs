//! Explicit finite groupoids.
//!
//! A [`FiniteGroupoid`] is an arrow table over a [`UnitSpace`] together with
//! a full composition table, inverses, one unit arrow per point and a
//! symmetric generating set `K` (never containing units).
//!
//! Composition convention: `compose(γ, μ)` is defined iff `s(γ) = r(μ)`, and
//! then `s(γμ) = s(μ)`, `r(γμ) = r(γ)`.

mod bisection;
mod bratteli;
mod families;
mod spec;
mod transformation;

use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unitspace::{UnitSpace, Word};

pub use bisection::{decompose_into_bisections, Bisection};
pub use bratteli::BratteliSpec;
pub use families::{group_bundle, pair_groupoid, units_only};
pub use spec::{build_from_spec, GroupoidSpec};
pub use transformation::{odometer_spec, GeneratorSpec, Mode, TransformationSpec};

/// Index of an arrow in its groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArrowId(pub u32);

impl ArrowId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Source, range and germ label of an arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrowRecord {
    pub source: Word,
    pub range: Word,
    pub label: u32,
}

/// Resource caps for groupoid construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_points: usize,
    pub max_arrows: usize,
    pub max_group_elements: usize,
    /// Cap on `Σ_x |G_x|·|G^x|`, the size of the composition table.
    pub max_composable_pairs: usize,
    /// Associativity is checked exhaustively up to this many composable
    /// triples and on a deterministic sample above it.
    pub exhaustive_triples: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_points: crate::unitspace::DEFAULT_MAX_POINTS,
            max_arrows: 250_000,
            max_group_elements: 50_000,
            max_composable_pairs: 20_000_000,
            exhaustive_triples: 4_000_000,
        }
    }
}

/// A set of arrows of one groupoid, as a bitset over arrow ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowSet {
    bits: FixedBitSet,
}

impl ArrowSet {
    pub fn empty(arrow_count: usize) -> Self {
        ArrowSet {
            bits: FixedBitSet::with_capacity(arrow_count),
        }
    }

    pub fn full(arrow_count: usize) -> Self {
        let mut set = Self::empty(arrow_count);
        set.bits.insert_range(..);
        set
    }

    pub fn from_ids(arrow_count: usize, ids: impl IntoIterator<Item = ArrowId>) -> Self {
        let mut set = Self::empty(arrow_count);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, id: ArrowId) -> bool {
        !self.bits.put(id.index())
    }

    pub fn remove(&mut self, id: ArrowId) {
        self.bits.set(id.index(), false);
    }

    pub fn contains(&self, id: ArrowId) -> bool {
        self.bits.contains(id.index())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.bits.ones().map(|i| ArrowId(i as u32))
    }

    pub fn union_with(&mut self, other: &ArrowSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn is_subset(&self, other: &ArrowSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn symmetric_difference_len(&self, other: &ArrowSet) -> usize {
        self.bits.symmetric_difference_count(&other.bits)
    }
}

/// Counts reported by the exhaustive axiom check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomReport {
    pub arrows: usize,
    pub composable_pairs: usize,
    pub triples_checked: usize,
    pub exhaustive: bool,
}

/// Raw ingredients handed to [`FiniteGroupoid::assemble`] by the constructors.
pub(crate) struct Parts {
    pub space: Arc<UnitSpace>,
    pub kind: String,
    pub arrows: Vec<ArrowRecord>,
    pub labels: Vec<String>,
    pub units: Vec<ArrowId>,
    pub inverse: Vec<ArrowId>,
    pub generators: Vec<ArrowId>,
}

#[derive(Debug)]
pub struct FiniteGroupoid {
    space: Arc<UnitSpace>,
    kind: String,
    arrows: Vec<ArrowRecord>,
    labels: Vec<String>,
    units: Vec<ArrowId>,
    inverse: Vec<ArrowId>,
    by_range: Vec<Vec<ArrowId>>,
    by_source: Vec<Vec<ArrowId>>,
    range_pos: Vec<u32>,
    // compose[γ][i] = γ ∘ by_range[s(γ)][i]
    compose: Vec<Vec<ArrowId>>,
    generators: ArrowSet,
    generators_by_source: Vec<Vec<ArrowId>>,
    lengths: OnceLock<Vec<Option<u32>>>,
}

impl FiniteGroupoid {
    /// Builds the composition table from `compose` (called exactly on the
    /// composable pairs), validates structural consistency and checks the
    /// groupoid axioms.
    pub(crate) fn assemble(
        parts: Parts,
        limits: &Limits,
        compose: impl Fn(ArrowId, ArrowId) -> ArrowId,
    ) -> Result<Self> {
        let Parts {
            space,
            kind,
            arrows,
            labels,
            units,
            inverse,
            generators,
        } = parts;
        let n_points = space.len();
        let n = arrows.len();
        if n > limits.max_arrows {
            return Err(Error::Resource(format!("{n} arrows exceeds the cap of {}", limits.max_arrows)));
        }
        if units.len() != n_points || inverse.len() != n {
            return Err(Error::Spec("unit or inverse table has the wrong length".into()));
        }
        let mut by_range = vec![Vec::new(); n_points];
        let mut by_source = vec![Vec::new(); n_points];
        let mut range_pos = vec![0u32; n];
        for (i, a) in arrows.iter().enumerate() {
            if a.source.index() >= n_points || a.range.index() >= n_points || a.label as usize >= labels.len() {
                return Err(Error::Spec(format!("arrow {i} refers to a missing point or label")));
            }
            range_pos[i] = by_range[a.range.index()].len() as u32;
            by_range[a.range.index()].push(ArrowId(i as u32));
            by_source[a.source.index()].push(ArrowId(i as u32));
        }
        for (x, &u) in units.iter().enumerate() {
            let rec = arrows
                .get(u.index())
                .ok_or_else(|| Error::Spec(format!("unit of point {x} is not an arrow")))?;
            if rec.source.index() != x || rec.range.index() != x {
                return Err(Error::Spec(format!("unit of point {x} is not a loop at {x}")));
            }
        }
        for (i, &inv) in inverse.iter().enumerate() {
            let (a, b) = (arrows[i], arrows.get(inv.index()).copied());
            match b {
                Some(b) if b.source == a.range && b.range == a.source => {}
                _ => return Err(Error::Spec(format!("inverse of arrow {i} has mismatched endpoints"))),
            }
        }
        let pairs: usize = (0..n_points).map(|x| by_range[x].len() * by_source[x].len()).sum();
        if pairs > limits.max_composable_pairs {
            return Err(Error::Resource(format!(
                "{pairs} composable pairs exceeds the cap of {}",
                limits.max_composable_pairs
            )));
        }
        let mut table = Vec::with_capacity(n);
        for (i, a) in arrows.iter().enumerate() {
            let gamma = ArrowId(i as u32);
            let row: Vec<ArrowId> = by_range[a.source.index()].iter().map(|&mu| compose(gamma, mu)).collect();
            for (&mu, &prod) in by_range[a.source.index()].iter().zip(&row) {
                let p = arrows
                    .get(prod.index())
                    .ok_or_else(|| Error::Spec(format!("product of {i} and {} is not an arrow", mu.0)))?;
                if p.source != arrows[mu.index()].source || p.range != a.range {
                    return Err(Error::Spec(format!(
                        "product of arrows {i} and {} has the wrong endpoints",
                        mu.0
                    )));
                }
            }
            table.push(row);
        }
        let unit_set: FixedBitSet = {
            let mut b = FixedBitSet::with_capacity(n);
            for u in &units {
                b.insert(u.index());
            }
            b
        };
        let mut gen_set = ArrowSet::empty(n);
        for &k in &generators {
            if k.index() >= n {
                return Err(Error::Spec(format!("generator {} is not an arrow", k.0)));
            }
            if !unit_set.contains(k.index()) {
                gen_set.insert(k);
            }
        }
        let mut generators_by_source = vec![Vec::new(); n_points];
        for k in gen_set.iter() {
            generators_by_source[arrows[k.index()].source.index()].push(k);
        }
        let groupoid = FiniteGroupoid {
            space,
            kind,
            arrows,
            labels,
            units,
            inverse,
            by_range,
            by_source,
            range_pos,
            compose: table,
            generators: gen_set,
            generators_by_source,
            lengths: OnceLock::new(),
        };
        groupoid.check_axioms(limits.exhaustive_triples)?;
        Ok(groupoid)
    }

    pub fn space(&self) -> &Arc<UnitSpace> {
        &self.space
    }

    /// Short description of the construction ("transformation/full", "bratteli", ...).
    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrows.len() as u32).map(ArrowId)
    }

    pub fn record(&self, a: ArrowId) -> ArrowRecord {
        self.arrows[a.index()]
    }

    pub fn source(&self, a: ArrowId) -> Word {
        self.arrows[a.index()].source
    }

    pub fn range(&self, a: ArrowId) -> Word {
        self.arrows[a.index()].range
    }

    pub fn label(&self, a: ArrowId) -> u32 {
        self.arrows[a.index()].label
    }

    pub fn label_name(&self, a: ArrowId) -> &str {
        &self.labels[self.label(a) as usize]
    }

    pub fn unit(&self, x: Word) -> ArrowId {
        self.units[x.index()]
    }

    pub fn is_unit(&self, a: ArrowId) -> bool {
        let rec = self.record(a);
        rec.source == rec.range && self.units[rec.source.index()] == a
    }

    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        self.inverse[a.index()]
    }

    /// `γμ`, defined iff `s(γ) = r(μ)`.
    pub fn compose(&self, gamma: ArrowId, mu: ArrowId) -> Option<ArrowId> {
        if self.source(gamma) != self.range(mu) {
            return None;
        }
        Some(self.compose[gamma.index()][self.range_pos[mu.index()] as usize])
    }

    /// `G^x`: arrows with range `x`.
    pub fn range_fiber(&self, x: Word) -> &[ArrowId] {
        &self.by_range[x.index()]
    }

    /// `G_x`: arrows with source `x`.
    pub fn source_fiber(&self, x: Word) -> &[ArrowId] {
        &self.by_source[x.index()]
    }

    pub fn generators(&self) -> &ArrowSet {
        &self.generators
    }

    pub fn unit_set(&self) -> ArrowSet {
        ArrowSet::from_ids(self.arrow_count(), self.units.iter().copied())
    }

    /// True when the only arrows with equal source and range are units.
    pub fn is_principal(&self) -> bool {
        self.arrows().all(|a| self.source(a) != self.range(a) || self.is_unit(a))
    }

    pub fn empty_set(&self) -> ArrowSet {
        ArrowSet::empty(self.arrow_count())
    }

    pub fn full_set(&self) -> ArrowSet {
        ArrowSet::full(self.arrow_count())
    }

    pub fn inverse_set(&self, set: &ArrowSet) -> ArrowSet {
        ArrowSet::from_ids(self.arrow_count(), set.iter().map(|a| self.inverse(a)))
    }

    /// `AB = {αβ : α ∈ A, β ∈ B, s(α) = r(β)}`.
    pub fn product(&self, left: &ArrowSet, right: &ArrowSet) -> ArrowSet {
        let mut out = self.empty_set();
        for beta in right.iter() {
            for &alpha in self.source_fiber(self.range(beta)) {
                if left.contains(alpha) {
                    out.insert(self.compose(alpha, beta).expect("composable"));
                }
            }
        }
        out
    }

    /// Exhaustive (or, above `exhaustive_triples`, deterministically sampled)
    /// check of the unit, inverse and associativity laws and of `K = K^-1`.
    pub fn check_axioms(&self, exhaustive_triples: usize) -> Result<AxiomReport> {
        let fail = |msg: String| Err(Error::InvariantViolation(format!("groupoid axiom: {msg}")));
        for a in self.arrows() {
            let (s, r) = (self.source(a), self.range(a));
            if self.compose(self.unit(r), a) != Some(a) || self.compose(a, self.unit(s)) != Some(a) {
                return fail(format!("unit law fails at arrow {}", a.0));
            }
            let inv = self.inverse(a);
            if self.inverse(inv) != a {
                return fail(format!("inverse is not involutive at arrow {}", a.0));
            }
            if self.compose(a, inv) != Some(self.unit(r)) || self.compose(inv, a) != Some(self.unit(s)) {
                return fail(format!("inverse law fails at arrow {}", a.0));
            }
            if self.generators.contains(a) != self.generators.contains(inv) {
                return fail(format!("generating set is not symmetric at arrow {}", a.0));
            }
        }
        let pairs: usize = self.space.points().map(|x| self.range_fiber(x).len() * self.source_fiber(x).len()).sum();
        let triples: usize = self
            .arrows()
            .map(|g| {
                self.range_fiber(self.source(g))
                    .iter()
                    .map(|&m| self.range_fiber(self.source(m)).len())
                    .sum::<usize>()
            })
            .sum();
        let exhaustive = triples <= exhaustive_triples;
        let mut checked = 0usize;
        let mut check = |g: ArrowId, m: ArrowId, v: ArrowId| -> Result<()> {
            let gm = self.compose(g, m).expect("composable");
            let mv = self.compose(m, v).expect("composable");
            if self.compose(gm, v) != self.compose(g, mv) {
                return Err(Error::InvariantViolation(format!(
                    "groupoid axiom: associativity fails at ({}, {}, {})",
                    g.0, m.0, v.0
                )));
            }
            checked += 1;
            Ok(())
        };
        if exhaustive {
            for g in self.arrows() {
                for &m in self.range_fiber(self.source(g)) {
                    for &v in self.range_fiber(self.source(m)) {
                        check(g, m, v)?;
                    }
                }
            }
        } else {
            let mut state = 0x9E37_79B9_7F4A_7C15u64;
            let mut next = |bound: usize| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % bound as u64) as usize
            };
            for _ in 0..exhaustive_triples {
                let g = ArrowId(next(self.arrow_count()) as u32);
                let fiber = self.range_fiber(self.source(g));
                let m = fiber[next(fiber.len())];
                let fiber = self.range_fiber(self.source(m));
                let v = fiber[next(fiber.len())];
                check(g, m, v)?;
            }
        }
        Ok(AxiomReport {
            arrows: self.arrow_count(),
            composable_pairs: pairs,
            triples_checked: checked,
            exhaustive,
        })
    }

    /// Word lengths with respect to an arbitrary generating set `gens`
    /// (units are stripped); `None` marks arrows not reachable.
    ///
    /// BFS from each unit `u_x` by left multiplication, so the search stays
    /// inside the source fiber `G_x`.
    pub fn word_lengths_for(&self, gens: &ArrowSet) -> Vec<Option<u32>> {
        let mut by_source = vec![Vec::new(); self.space.len()];
        for k in gens.iter() {
            if !self.is_unit(k) {
                by_source[self.source(k).index()].push(k);
            }
        }
        self.bfs_lengths(&by_source)
    }

    fn bfs_lengths(&self, gens_by_source: &[Vec<ArrowId>]) -> Vec<Option<u32>> {
        let mut lengths = vec![None; self.arrow_count()];
        let mut queue = VecDeque::new();
        for x in self.space.points() {
            let u = self.unit(x);
            lengths[u.index()] = Some(0);
            queue.push_back(u);
            while let Some(gamma) = queue.pop_front() {
                let next = lengths[gamma.index()].unwrap() + 1;
                for &k in &gens_by_source[self.range(gamma).index()] {
                    let prod = self.compose(k, gamma).expect("composable");
                    if lengths[prod.index()].is_none() {
                        lengths[prod.index()] = Some(next);
                        queue.push_back(prod);
                    }
                }
            }
        }
        lengths
    }

    /// Word lengths for the groupoid's own generating set `K` (cached).
    pub fn word_lengths(&self) -> &[Option<u32>] {
        self.lengths.get_or_init(|| self.bfs_lengths(&self.generators_by_source))
    }

    /// `ℓ_K(γ)`: 0 on units, otherwise the least `n` with `γ ∈ K^n`.
    pub fn word_length(&self, a: ArrowId) -> Result<u32> {
        self.word_lengths()[a.index()]
            .ok_or_else(|| Error::Generation(format!("arrow {} is not a product of generators", a.0)))
    }

    /// Ok iff every arrow is reachable from `K`.
    pub fn check_generation(&self) -> Result<()> {
        match self.word_lengths().iter().position(Option::is_none) {
            None => Ok(()),
            Some(i) => Err(Error::Generation(format!(
                "arrow {i} ({} -> {}) is not a product of generators",
                self.space.format(self.arrows[i].source),
                self.space.format(self.arrows[i].range)
            ))),
        }
    }

    /// Arrows reachable from `K` have finite length; the largest such length.
    pub fn max_word_length(&self) -> u32 {
        self.word_lengths().iter().flatten().copied().max().unwrap_or(0)
    }

    /// The subgroupoid with arrow set `keep` (must contain every unit and be
    /// closed under composition and inversion), with generating set `gens`.
    /// Returns the subgroupoid and the embedding of its arrows into `self`.
    pub fn restrict(&self, keep: &ArrowSet, gens: &ArrowSet, kind: &str) -> Result<(FiniteGroupoid, Vec<ArrowId>)> {
        let embedding: Vec<ArrowId> = keep.iter().collect();
        let mut local = vec![u32::MAX; self.arrow_count()];
        for (i, a) in embedding.iter().enumerate() {
            local[a.index()] = i as u32;
        }
        let to_local = |a: ArrowId| -> Result<ArrowId> {
            match local[a.index()] {
                u32::MAX => Err(Error::Validation(format!("arrow set is not closed: arrow {} escapes", a.0))),
                i => Ok(ArrowId(i)),
            }
        };
        let units = self.space.points().map(|x| to_local(self.unit(x))).collect::<Result<Vec<_>>>()?;
        let inverse = embedding.iter().map(|&a| to_local(self.inverse(a))).collect::<Result<Vec<_>>>()?;
        for &a in &embedding {
            for &b in self.range_fiber(self.source(a)) {
                if keep.contains(b) {
                    to_local(self.compose(a, b).unwrap())?;
                }
            }
        }
        let generators = gens.iter().filter(|g| keep.contains(*g)).map(to_local).collect::<Result<Vec<_>>>()?;
        let parts = Parts {
            space: self.space.clone(),
            kind: kind.to_string(),
            arrows: embedding.iter().map(|&a| self.record(a)).collect(),
            labels: self.labels.clone(),
            units,
            inverse,
            generators,
        };
        let limits = Limits::default();
        let sub = FiniteGroupoid::assemble(parts, &limits, |g, m| {
            ArrowId(local[self.compose(embedding[g.index()], embedding[m.index()]).unwrap().index()])
        })?;
        Ok((sub, embedding))
    }

    /// The open subgroupoid generated by `l` together with all units; its
    /// generating set is `l ∪ l^-1` minus units.
    pub fn generated_subgroupoid(&self, l: &ArrowSet) -> Result<(FiniteGroupoid, Vec<ArrowId>)> {
        let mut gens = l.clone();
        gens.union_with(&self.inverse_set(l));
        let mut closure = self.unit_set();
        closure.union_with(&gens);
        loop {
            let next = self.product(&closure, &closure);
            if next.is_subset(&closure) {
                break;
            }
            closure.union_with(&next);
        }
        let gens = ArrowSet::from_ids(self.arrow_count(), gens.iter().filter(|&g| !self.is_unit(g)));
        self.restrict(&closure, &gens, &format!("{}/generated", self.kind))
    }

    /// `Iso(G)` and the principal quotient `G/Iso(G) ≅ R_G`.
    pub fn isotropy_and_quotient(&self) -> Result<IsotropyDecomposition> {
        let iso_set = ArrowSet::from_ids(self.arrow_count(), self.arrows().filter(|&a| self.source(a) == self.range(a)));
        let iso_gens = ArrowSet::from_ids(self.arrow_count(), iso_set.iter().filter(|&a| !self.is_unit(a)));
        let (isotropy, iso_embedding) = self.restrict(&iso_set, &iso_gens, &format!("{}/isotropy", self.kind))?;

        // quotient arrows: distinct (source, range) pairs in order of first appearance
        let mut pair_index = std::collections::HashMap::new();
        let mut q_arrows = Vec::new();
        let mut quotient_map = Vec::with_capacity(self.arrow_count());
        for a in self.arrows() {
            let rec = self.record(a);
            let id = *pair_index.entry((rec.source, rec.range)).or_insert_with(|| {
                q_arrows.push(rec);
                (q_arrows.len() - 1) as u32
            });
            quotient_map.push(ArrowId(id));
        }
        let units = self.space.points().map(|x| quotient_map[self.unit(x).index()]).collect();
        let inverse = q_arrows
            .iter()
            .map(|r| ArrowId(pair_index[&(r.range, r.source)]))
            .collect();
        let generators = self.generators.iter().map(|k| quotient_map[k.index()]).collect();
        let parts = Parts {
            space: self.space.clone(),
            kind: format!("{}/principal", self.kind),
            arrows: q_arrows.clone(),
            labels: self.labels.clone(),
            units,
            inverse,
            generators,
        };
        let quotient = FiniteGroupoid::assemble(parts, &Limits::default(), |g, m| {
            let (g, m) = (q_arrows[g.index()], q_arrows[m.index()]);
            ArrowId(pair_index[&(m.source, g.range)])
        })?;

        // strong surjectivity on range fibers, and endpoint compatibility
        for x in self.space.points() {
            let mut hit = quotient.empty_set();
            for &a in self.range_fiber(x) {
                let q = quotient_map[a.index()];
                if quotient.source(q) != self.source(a) || quotient.range(q) != self.range(a) {
                    return Err(Error::InvariantViolation(format!("quotient map moves endpoints of arrow {}", a.0)));
                }
                hit.insert(q);
            }
            if hit.len() != quotient.range_fiber(x).len() {
                return Err(Error::InvariantViolation(format!(
                    "quotient map is not surjective on the range fiber over {}",
                    self.space.format(x)
                )));
            }
        }
        Ok(IsotropyDecomposition {
            isotropy,
            iso_embedding,
            quotient,
            quotient_map,
        })
    }

    /// Arrow table rows: id, source, range, label, in_K.
    pub fn arrow_table(&self) -> Vec<(u32, String, String, String, bool)> {
        self.arrows()
            .map(|a| {
                (
                    a.0,
                    self.space.format(self.source(a)),
                    self.space.format(self.range(a)),
                    self.label_name(a).to_string(),
                    self.generators.contains(a),
                )
            })
            .collect()
    }

    /// Orbits of the unit space (connected components of the orbital graph).
    pub fn orbits(&self) -> Vec<Vec<Word>> {
        let n = self.space.len();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for x in self.space.points() {
            if seen[x.index()] {
                continue;
            }
            let mut orbit: Vec<Word> = self.source_fiber(x).iter().map(|&a| self.range(a)).collect();
            orbit.sort();
            orbit.dedup();
            for y in &orbit {
                seen[y.index()] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_minimal(&self) -> bool {
        self.orbits().len() == 1
    }
}

/// Result of [`FiniteGroupoid::isotropy_and_quotient`].
#[derive(Debug)]
pub struct IsotropyDecomposition {
    pub isotropy: FiniteGroupoid,
    /// Arrow `i` of `isotropy` is arrow `iso_embedding[i]` of the original.
    pub iso_embedding: Vec<ArrowId>,
    pub quotient: FiniteGroupoid,
    /// Image of each original arrow in `quotient`.
    pub quotient_map: Vec<ArrowId>,
}
