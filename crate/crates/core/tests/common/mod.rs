//! Instance builders and independent oracles shared by the integration tests.
//!
//! The oracles work from raw data (integer arithmetic on `Z/2^d`, the arrow
//! records, explicit permutations) rather than from the algorithms under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use ample_core::groupoid::{
    build_from_spec, odometer_spec, BratteliSpec, GeneratorSpec, GroupoidSpec, Mode, TransformationSpec,
};
use ample_core::{ArrowId, ArrowSet, Bisection, ClopenSet, FiniteGroupoid, Limits, Rational, Word};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn build(spec: GroupoidSpec) -> FiniteGroupoid {
    build_from_spec(&spec, &Limits::default()).expect("bundled instance builds")
}

pub fn odometer(depth: u32) -> FiniteGroupoid {
    build(GroupoidSpec::Transformation(odometer_spec(depth, Mode::Full)))
}

pub fn bratteli(edges: u32, depth: u32) -> FiniteGroupoid {
    build(GroupoidSpec::Bratteli(BratteliSpec::stationary_single(edges, depth)))
}

pub fn bratteli_two_vertex(depth: u32) -> FiniteGroupoid {
    build(GroupoidSpec::Bratteli(BratteliSpec {
        level_sizes: vec![1, 2, 2, 2],
        matrices: vec![vec![vec![1, 1]], vec![vec![1, 1], vec![1, 0]], vec![vec![1, 1], vec![1, 0]]],
        depth,
    }))
}

pub fn pair(alphabet: u32, depth: u32) -> FiniteGroupoid {
    build(GroupoidSpec::Pair { alphabet, depth })
}

pub fn bundle(alphabet: u32, depth: u32, order: u32) -> FiniteGroupoid {
    build(GroupoidSpec::GroupBundle { alphabet, depth, order })
}

/// Every bundled instance, with a name.
pub fn bundled_instances() -> Vec<(String, FiniteGroupoid)> {
    let mut out = Vec::new();
    for d in 2..=4 {
        out.push((format!("odometer d={d}"), odometer(d)));
    }
    for d in 1..=3 {
        out.push((format!("bratteli 2-edge d={d}"), bratteli(2, d)));
        out.push((format!("bratteli two-vertex d={d}"), bratteli_two_vertex(d)));
    }
    out.push(("bratteli 3-edge d=2".into(), bratteli(3, 2)));
    for (a, d) in [(2, 1), (2, 2), (3, 1), (2, 3)] {
        out.push((format!("pair {a}^{d}"), pair(a, d)));
    }
    for k in [2, 3, 4, 5] {
        out.push((format!("bundle Z/{k}"), bundle(2, 2, k)));
    }
    out
}

fn word_string(mut v: usize, alphabet: u32, depth: u32) -> String {
    let mut s = vec![b'0'; depth as usize];
    for i in (0..depth as usize).rev() {
        s[i] = b'0' + (v % alphabet as usize) as u8;
        v /= alphabet as usize;
    }
    String::from_utf8(s).unwrap()
}

/// A transformation spec with `gens` random permutations given as explicit maps.
pub fn random_transformation<R: Rng>(
    rng: &mut R,
    alphabet: u32,
    depth: u32,
    gens: usize,
    mode: Mode,
) -> (TransformationSpec, Vec<Vec<usize>>) {
    let n = (alphabet as usize).pow(depth);
    let mut perms = Vec::new();
    let mut generators = Vec::new();
    for i in 0..gens {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        let map: BTreeMap<String, String> = (0..n)
            .map(|x| (word_string(x, alphabet, depth), word_string(p[x], alphabet, depth)))
            .collect();
        generators.push(GeneratorSpec {
            name: format!("g{i}"),
            map: Some(map),
            rewrite: None,
            builtin: None,
        });
        perms.push(p);
    }
    (
        TransformationSpec {
            alphabet,
            depth,
            generators,
            mode,
        },
        perms,
    )
}

/// Cyclic distance of `k` from 0 in `Z/m`.
pub fn cyclic_dist(k: usize, m: usize) -> usize {
    let k = k % m;
    k.min(m - k)
}

/// Odometer growth computed on `Z/2^d` with generators `±1`, never touching the groupoid.
pub fn odometer_growth_oracle(depth: u32, n_max: usize) -> Vec<usize> {
    let m = 1usize << depth;
    let mut dist = vec![usize::MAX; m];
    let mut queue = VecDeque::from([0usize]);
    dist[0] = 0;
    while let Some(k) = queue.pop_front() {
        for next in [(k + 1) % m, (k + m - 1) % m] {
            if dist[next] == usize::MAX {
                dist[next] = dist[k] + 1;
                queue.push_back(next);
            }
        }
    }
    (0..=n_max).map(|n| dist.iter().filter(|&&d| d <= n).count()).collect()
}

pub fn ratio(p: usize, q: usize) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Word lengths with respect to `gens`, by BFS over the arrow records only.
pub fn oracle_word_lengths(g: &FiniteGroupoid, gens: &ArrowSet) -> Vec<Option<u32>> {
    let mut len = vec![None; g.arrow_count()];
    let mut queue = VecDeque::new();
    for x in g.space().points() {
        len[g.unit(x).index()] = Some(0);
        queue.push_back(g.unit(x));
    }
    while let Some(a) = queue.pop_front() {
        let l = len[a.index()].unwrap();
        for k in gens.iter() {
            if let Some(c) = g.compose(k, a) {
                if len[c.index()].is_none() {
                    len[c.index()] = Some(l + 1);
                    queue.push_back(c);
                }
            }
        }
    }
    len
}

/// Checks a witness directly against the arrow records: every point of `A`
/// is the source of some arrow, every arrow lands in `B`, each piece is a
/// bisection, and within a family no two arrows share a range.
pub fn oracle_witness_ok(g: &FiniteGroupoid, a: &ClopenSet, b: &ClopenSet, families: &[Vec<Bisection>]) -> bool {
    let mut covered = BTreeSet::new();
    for family in families {
        let mut ranges = BTreeSet::new();
        for piece in family {
            let ids = piece.arrow_ids();
            let sources: BTreeSet<Word> = ids.iter().map(|&i| g.source(i)).collect();
            let piece_ranges: BTreeSet<Word> = ids.iter().map(|&i| g.range(i)).collect();
            if sources.len() != ids.len() || piece_ranges.len() != ids.len() {
                return false;
            }
            for &i in &ids {
                if !b.contains(g.range(i)) || !ranges.insert(g.range(i)) {
                    return false;
                }
                covered.insert(g.source(i));
            }
        }
    }
    a.iter().all(|x| covered.contains(&x))
}

/// `(f*h)(αβ) += f(α)h(β)` over composable support pairs.
pub fn oracle_convolve(
    g: &FiniteGroupoid,
    f: &BTreeMap<ArrowId, Rational>,
    h: &BTreeMap<ArrowId, Rational>,
) -> BTreeMap<ArrowId, Rational> {
    let mut out: BTreeMap<ArrowId, Rational> = BTreeMap::new();
    for (&alpha, fv) in f {
        for (&beta, hv) in h {
            if g.source(alpha) == g.range(beta) {
                let c = g.compose(alpha, beta).unwrap();
                *out.entry(c).or_default() += fv * hv;
            }
        }
    }
    out.retain(|_, v| *v != Rational::from_integer(0.into()));
    out
}

/// A random subset of `universe` with each element kept with probability `p`.
pub fn random_subset<R: Rng>(rng: &mut R, g: &FiniteGroupoid, p: f64) -> ClopenSet {
    ClopenSet::from_words(g.space(), g.space().points().filter(|_| rng.gen_bool(p))).unwrap()
}
