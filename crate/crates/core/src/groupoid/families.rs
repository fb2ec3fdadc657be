use std::sync::Arc;

use super::{ArrowId, ArrowRecord, FiniteGroupoid, Limits, Parts};
use crate::error::{Error, Result};
use crate::unitspace::{UnitSpace, Word};

/// The pair groupoid `X × X`; `K` is every off-diagonal arrow.
pub fn pair_groupoid(space: &Arc<UnitSpace>) -> Result<FiniteGroupoid> {
    let n = space.len();
    let limits = Limits::default();
    if n * n > limits.max_arrows {
        return Err(Error::Resource(format!("pair groupoid on {n} points exceeds the arrow cap")));
    }
    // arrow (x, y) has id x*n + y
    let id = |x: usize, y: usize| ArrowId((x * n + y) as u32);
    let mut arrows = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            arrows.push(ArrowRecord {
                source: Word(x as u32),
                range: Word(y as u32),
                label: ((y + n - x) % n) as u32,
            });
        }
    }
    let parts = Parts {
        space: space.clone(),
        kind: "pair".into(),
        arrows,
        labels: (0..n).map(|k| if k == 0 { "e".into() } else { format!("+{k}") }).collect(),
        units: (0..n).map(|x| id(x, x)).collect(),
        inverse: (0..n * n).map(|a| id(a % n, a / n)).collect(),
        generators: (0..n * n).filter(|a| a / n != a % n).map(|a| ArrowId(a as u32)).collect(),
    };
    FiniteGroupoid::assemble(parts, &limits, |a, b| id(b.index() / n, a.index() % n))
}

/// `X × Z/k` with trivial action: a copy of the cyclic group at every point.
/// `K = {±1}` at each point.
pub fn group_bundle(space: &Arc<UnitSpace>, order: u32) -> Result<FiniteGroupoid> {
    if order == 0 {
        return Err(Error::Spec("group bundle order must be positive".into()));
    }
    let (n, k) = (space.len(), order as usize);
    let id = |x: usize, j: usize| ArrowId((x * k + j) as u32);
    let mut arrows = Vec::with_capacity(n * k);
    for x in 0..n {
        for j in 0..k {
            arrows.push(ArrowRecord {
                source: Word(x as u32),
                range: Word(x as u32),
                label: j as u32,
            });
        }
    }
    let mut generators = Vec::new();
    if k > 1 {
        for x in 0..n {
            generators.push(id(x, 1));
            generators.push(id(x, k - 1));
        }
    }
    generators.sort();
    generators.dedup();
    let parts = Parts {
        space: space.clone(),
        kind: format!("bundle/Z{k}"),
        arrows,
        labels: (0..k).map(|j| if j == 0 { "e".into() } else { format!("+{j}") }).collect(),
        units: (0..n).map(|x| id(x, 0)).collect(),
        inverse: (0..n * k).map(|a| id(a / k, (k - a % k) % k)).collect(),
        generators,
    };
    FiniteGroupoid::assemble(parts, &Limits::default(), |a, b| {
        id(b.index() / k, (a.index() % k + b.index() % k) % k)
    })
}

/// The trivial groupoid: one unit per point and nothing else.
pub fn units_only(space: &Arc<UnitSpace>) -> Result<FiniteGroupoid> {
    group_bundle(space, 1).map(|mut g| {
        g.kind = "units".into();
        g
    })
}
