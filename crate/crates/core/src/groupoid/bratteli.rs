use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ArrowId, ArrowRecord, FiniteGroupoid, Limits, Parts};
use crate::error::{Error, Result};
use crate::unitspace::{UnitSpace, Word};

/// A Bratteli diagram truncated at `depth`.
///
/// `level_sizes[0]` must be 1 (the root). `matrices[l][i][j]` is the number of
/// edges from vertex `i` at level `l` to vertex `j` at level `l + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BratteliSpec {
    pub level_sizes: Vec<u32>,
    pub matrices: Vec<Vec<Vec<u32>>>,
    pub depth: u32,
}

impl BratteliSpec {
    /// Single-vertex stationary diagram with `edges` parallel edges per level.
    pub fn stationary_single(edges: u32, depth: u32) -> Self {
        BratteliSpec {
            level_sizes: vec![1; depth as usize + 1],
            matrices: vec![vec![vec![edges]]; depth as usize],
            depth,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.level_sizes.first() != Some(&1) {
            return Err(Error::Spec("bratteli: level 0 must hold exactly one root vertex".into()));
        }
        if self.matrices.len() + 1 != self.level_sizes.len() {
            return Err(Error::Spec("bratteli: need one matrix between each pair of adjacent levels".into()));
        }
        if self.depth == 0 || self.depth as usize > self.matrices.len() {
            return Err(Error::Spec(format!(
                "bratteli: truncation depth {} must lie in 1..={}",
                self.depth,
                self.matrices.len()
            )));
        }
        for (l, m) in self.matrices.iter().enumerate() {
            let (rows, cols) = (self.level_sizes[l] as usize, self.level_sizes[l + 1] as usize);
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(Error::Spec(format!("bratteli: matrix {l} must be {rows}x{cols}")));
            }
            if let Some(i) = (0..rows).find(|&i| m[i].iter().all(|&e| e == 0)) {
                return Err(Error::Spec(format!("bratteli: level {l} is disconnected, vertex {i} has no outgoing edge")));
            }
            if let Some(j) = (0..cols).find(|&j| m.iter().all(|r| r[j] == 0)) {
                return Err(Error::Spec(format!(
                    "bratteli: level {} is disconnected, vertex {j} has no incoming edge",
                    l + 1
                )));
            }
        }
        Ok(())
    }
}

struct Path {
    symbols: Vec<u8>,
    terminal: u32,
}

fn enumerate_paths(spec: &BratteliSpec, max_points: usize) -> Result<(u32, Vec<Path>)> {
    let depth = spec.depth as usize;
    // out-edges of each vertex, ordered by (target, multiplicity)
    let out: Vec<Vec<Vec<u32>>> = spec.matrices[..depth]
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .flat_map(|(j, &k)| std::iter::repeat(j as u32).take(k as usize))
                        .collect()
                })
                .collect()
        })
        .collect();
    let alphabet = out.iter().flatten().map(Vec::len).max().unwrap_or(1).max(2) as u32;
    if alphabet > 36 {
        return Err(Error::Spec(format!("bratteli: out-degree {alphabet} exceeds 36")));
    }
    let mut paths = vec![Path {
        symbols: Vec::new(),
        terminal: 0,
    }];
    for edges in &out {
        let mut next = Vec::new();
        for p in &paths {
            for (e, &t) in edges[p.terminal as usize].iter().enumerate() {
                let mut symbols = p.symbols.clone();
                symbols.push(e as u8);
                next.push(Path { symbols, terminal: t });
            }
            if next.len() > max_points {
                return Err(Error::Resource(format!("bratteli path space exceeds {max_points} points")));
            }
        }
        paths = next;
    }
    Ok((alphabet, paths))
}

pub(crate) fn build(spec: &BratteliSpec, limits: &Limits) -> Result<FiniteGroupoid> {
    spec.validate()?;
    let (alphabet, paths) = enumerate_paths(spec, limits.max_points)?;
    let space = UnitSpace::from_words(alphabet, spec.depth, paths.iter().map(|p| p.symbols.clone()).collect())?;
    let mut terminal = vec![0u32; space.len()];
    for p in &paths {
        terminal[space.word_of(&p.symbols).unwrap().index()] = p.terminal;
    }
    let mut classes: Vec<Vec<Word>> = vec![Vec::new(); spec.level_sizes[spec.depth as usize] as usize];
    for x in space.points() {
        classes[terminal[x.index()] as usize].push(x);
    }
    let total: usize = classes.iter().map(|c| c.len() * c.len()).sum();
    if total > limits.max_arrows {
        return Err(Error::Resource(format!("{total} arrows exceeds the cap of {}", limits.max_arrows)));
    }

    let mut labels = vec!["e".to_string()];
    let mut label_index: HashMap<String, u32> = HashMap::from([("e".to_string(), 0)]);
    let mut arrows = Vec::with_capacity(total);
    let mut id_of: HashMap<(u32, u32), u32> = HashMap::with_capacity(total);
    for x in space.points() {
        let class = &classes[terminal[x.index()] as usize];
        for &y in class {
            let (sx, sy) = (space.symbols(x), space.symbols(y));
            let label = match (0..sx.len()).rev().find(|&i| sx[i] != sy[i]) {
                None => 0,
                Some(last) => {
                    let name = format!(
                        "{}|{}",
                        space.format(y).get(..=last).unwrap_or_default(),
                        space.format(x).get(..=last).unwrap_or_default()
                    );
                    *label_index.entry(name.clone()).or_insert_with(|| {
                        labels.push(name);
                        (labels.len() - 1) as u32
                    })
                }
            };
            id_of.insert((x.0, y.0), arrows.len() as u32);
            arrows.push(ArrowRecord {
                source: x,
                range: y,
                label,
            });
        }
    }
    let lookup = |x: Word, y: Word| ArrowId(id_of[&(x.0, y.0)]);

    // consecutive paths in colex order within each class, and their inverses
    let mut generators = Vec::new();
    for class in &classes {
        let mut order = class.clone();
        order.sort_by(|&a, &b| space.symbols(a).iter().rev().cmp(space.symbols(b).iter().rev()));
        for w in order.windows(2) {
            generators.push(lookup(w[0], w[1]));
            generators.push(lookup(w[1], w[0]));
        }
    }
    generators.sort();
    let parts = Parts {
        space: space.clone(),
        kind: "bratteli".into(),
        units: space.points().map(|x| lookup(x, x)).collect(),
        inverse: arrows.iter().map(|a| lookup(a.range, a.source)).collect(),
        arrows: arrows.clone(),
        labels,
        generators,
    };
    FiniteGroupoid::assemble(parts, limits, |a, b| {
        lookup(arrows[b.index()].source, arrows[a.index()].range)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_two_edge() {
        let g = build(&BratteliSpec::stationary_single(2, 3), &Limits::default()).unwrap();
        assert_eq!(g.space().len(), 8);
        assert_eq!(g.arrow_count(), 64);
        g.check_generation().unwrap();
        let g1 = build(&BratteliSpec::stationary_single(2, 1), &Limits::default()).unwrap();
        assert_eq!((g1.space().len(), g1.arrow_count()), (2, 4));
    }

    #[test]
    fn chain_is_units_only() {
        let g = build(&BratteliSpec::stationary_single(1, 4), &Limits::default()).unwrap();
        assert_eq!(g.arrow_count(), 1);
        assert!(g.generators().is_empty());
    }

    #[test]
    fn two_vertex_diagram_has_two_tail_classes() {
        let spec = BratteliSpec {
            level_sizes: vec![1, 2, 2],
            matrices: vec![vec![vec![1, 1]], vec![vec![1, 1], vec![1, 1]]],
            depth: 2,
        };
        let g = build(&spec, &Limits::default()).unwrap();
        assert_eq!(g.space().len(), 4);
        // two classes of two paths each
        assert_eq!(g.arrow_count(), 8);
        assert_eq!(g.orbits().len(), 2);
        g.check_generation().unwrap();
    }

    #[test]
    fn labels_are_bisections() {
        let spec = BratteliSpec {
            level_sizes: vec![1, 2, 2, 1],
            matrices: vec![vec![vec![2, 1]], vec![vec![1, 1], vec![2, 0]], vec![vec![1], vec![2]]],
            depth: 3,
        };
        let g = build(&spec, &Limits::default()).unwrap();
        let mut seen = HashMap::new();
        for a in g.arrows() {
            let e = seen.entry(g.label(a)).or_insert_with(|| (Vec::new(), Vec::new()));
            e.0.push(g.source(a));
            e.1.push(g.range(a));
        }
        for (_, (mut s, mut r)) in seen {
            let n = s.len();
            s.dedup();
            r.sort();
            r.dedup();
            assert_eq!((s.len(), r.len()), (n, n));
        }
    }

    #[test]
    fn disconnected_level_is_a_spec_error() {
        let spec = BratteliSpec {
            level_sizes: vec![1, 2],
            matrices: vec![vec![vec![1, 0]]],
            depth: 1,
        };
        assert!(matches!(build(&spec, &Limits::default()), Err(Error::Spec(_))));
    }

    #[test]
    fn depth_beyond_levels_is_a_spec_error() {
        let mut spec = BratteliSpec::stationary_single(2, 2);
        spec.depth = 3;
        assert!(matches!(build(&spec, &Limits::default()), Err(Error::Spec(_))));
    }
}
