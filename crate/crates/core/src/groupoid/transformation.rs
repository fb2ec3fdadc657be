use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ArrowId, ArrowRecord, FiniteGroupoid, Limits, Parts};
use crate::error::{Error, Result};
use crate::unitspace::{UnitSpace, Word};

/// Full mode keeps the faithful group image; principal mode keeps the orbit relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Full,
    Principal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `x ↦ x + 1 mod k^d`, most significant symbol first.
    Odometer,
    Identity,
}

/// One named generator. Exactly one of `map`, `rewrite`, `builtin` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    /// Explicit point map, word to word.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<std::collections::BTreeMap<String, String>>,
    /// Prefix rewrites `p·w ↦ q·w` with `|p| = |q|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewrite: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationSpec {
    pub alphabet: u32,
    pub depth: u32,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub mode: Mode,
}

/// The binary odometer of the given depth.
pub fn odometer_spec(depth: u32, mode: Mode) -> TransformationSpec {
    TransformationSpec {
        alphabet: 2,
        depth,
        generators: vec![GeneratorSpec {
            name: "a".into(),
            map: None,
            rewrite: None,
            builtin: Some(Builtin::Odometer),
        }],
        mode,
    }
}

type PartialMap = Vec<Option<u32>>;

fn resolve(space: &UnitSpace, g: &GeneratorSpec) -> Result<PartialMap> {
    let n = space.len();
    let set = [g.map.is_some(), g.rewrite.is_some(), g.builtin.is_some()];
    if set.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::Spec(format!(
            "generator {}: exactly one of map, rewrite, builtin must be given",
            g.name
        )));
    }
    let mut image: PartialMap = vec![None; n];
    if let Some(map) = &g.map {
        for (from, to) in map {
            let x = space.parse_word(from).map_err(|e| Error::Spec(format!("generator {}: {e}", g.name)))?;
            let y = space.parse_word(to).map_err(|e| Error::Spec(format!("generator {}: {e}", g.name)))?;
            image[x.index()] = Some(y.0);
        }
    } else if let Some(pairs) = &g.rewrite {
        let mut domains: Vec<Vec<u8>> = Vec::new();
        for (p, q) in pairs {
            if p.len() != q.len() || p.len() > space.depth() as usize {
                return Err(Error::Spec(format!(
                    "generator {}: rewrite {p} -> {q} needs equal prefix lengths at most the depth",
                    g.name
                )));
            }
            let (p, q) = (symbols(space, p, &g.name)?, symbols(space, q, &g.name)?);
            if domains.iter().any(|d| d.starts_with(&p) || p.starts_with(d)) {
                return Err(Error::Spec(format!("generator {}: rewrite source domains overlap", g.name)));
            }
            for x in space.points() {
                let w = space.symbols(x);
                if w.starts_with(&p) {
                    let mut target = q.clone();
                    target.extend_from_slice(&w[p.len()..]);
                    let y = space.word_of(&target).ok_or_else(|| {
                        Error::Spec(format!("generator {}: rewrite leaves the unit space", g.name))
                    })?;
                    image[x.index()] = Some(y.0);
                }
            }
            domains.push(p);
        }
    } else {
        match g.builtin.unwrap() {
            Builtin::Identity => image = (0..n as u32).map(Some).collect(),
            Builtin::Odometer => {
                if !space.is_full() {
                    return Err(Error::Spec("the odometer needs a full word space".into()));
                }
                image = (0..n as u32).map(|x| Some((x + 1) % n as u32)).collect();
            }
        }
    }
    let mut hit = vec![false; n];
    for y in image.iter().flatten() {
        if std::mem::replace(&mut hit[*y as usize], true) {
            return Err(Error::Spec(format!(
                "generator {} is not injective: {} has two preimages",
                g.name,
                space.format(Word(*y))
            )));
        }
    }
    Ok(image)
}

fn symbols(space: &UnitSpace, text: &str, name: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c.to_digit(36) {
            Some(v) if v < space.alphabet() => Ok(v as u8),
            _ => Err(Error::Spec(format!("generator {name}: bad symbol {c:?} in {text:?}"))),
        })
        .collect()
}

fn invert(map: &PartialMap) -> PartialMap {
    let mut inv = vec![None; map.len()];
    for (x, y) in map.iter().enumerate() {
        if let Some(y) = y {
            inv[*y as usize] = Some(x as u32);
        }
    }
    inv
}

/// Letters: every generator followed by its inverse.
fn letters(space: &UnitSpace, spec: &TransformationSpec) -> Result<Vec<(String, PartialMap)>> {
    let mut names = std::collections::HashSet::new();
    let mut out = Vec::new();
    for g in &spec.generators {
        if !names.insert(g.name.clone()) {
            return Err(Error::Spec(format!("duplicate generator name {}", g.name)));
        }
        let map = resolve(space, g)?;
        let inv = invert(&map);
        out.push((g.name.clone(), map));
        out.push((format!("{}^-1", g.name), inv));
    }
    Ok(out)
}

pub(crate) fn build(spec: &TransformationSpec, limits: &Limits) -> Result<FiniteGroupoid> {
    let space = UnitSpace::with_max_points(spec.alphabet, spec.depth, limits.max_points)?;
    let letters = letters(&space, spec)?;
    match spec.mode {
        Mode::Full => build_full(space, letters, limits),
        Mode::Principal => build_principal(space, letters, limits),
    }
}

fn build_full(space: Arc<UnitSpace>, letters: Vec<(String, PartialMap)>, limits: &Limits) -> Result<FiniteGroupoid> {
    let n = space.len();
    let mut perms: Vec<Vec<u32>> = Vec::new();
    for (name, map) in &letters {
        let perm: Option<Vec<u32>> = map.iter().copied().collect();
        match perm {
            Some(p) => perms.push(p),
            None => {
                return Err(Error::Spec(format!(
                    "full mode needs total permutations, but {name} is partial; use principal mode"
                )))
            }
        }
    }
    // group closure, identity first, BFS by left multiplication with letters
    let identity: Vec<u32> = (0..n as u32).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut elements = vec![identity.clone()];
    let mut names = vec!["e".to_string()];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (l, (lname, _)) in letters.iter().enumerate() {
            let next: Vec<u32> = elements[e].iter().map(|&y| perms[l][y as usize]).collect();
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() >= limits.max_group_elements {
                return Err(Error::Resource(format!(
                    "generated group exceeds {} elements",
                    limits.max_group_elements
                )));
            }
            let id = elements.len() as u32;
            index.insert(next.clone(), id);
            names.push(if e == 0 { lname.clone() } else { format!("{lname}·{}", names[e]) });
            elements.push(next);
            queue.push_back(id as usize);
        }
    }
    let order = elements.len();
    if order.saturating_mul(n) > limits.max_arrows {
        return Err(Error::Resource(format!(
            "{order} group elements on {n} points exceeds the cap of {} arrows",
            limits.max_arrows
        )));
    }
    let arrow = |g: usize, x: usize| ArrowId((g * n + x) as u32);
    let mut arrows = Vec::with_capacity(order * n);
    for (g, perm) in elements.iter().enumerate() {
        for x in 0..n {
            arrows.push(ArrowRecord {
                source: Word(x as u32),
                range: Word(perm[x]),
                label: g as u32,
            });
        }
    }
    let inverse_elem: Vec<usize> = elements
        .iter()
        .map(|p| {
            let mut inv = vec![0u32; n];
            for (x, &y) in p.iter().enumerate() {
                inv[y as usize] = x as u32;
            }
            index[&inv] as usize
        })
        .collect();
    // multiplication table, filled on demand
    let table = std::cell::RefCell::new(vec![u32::MAX; order * order]);
    let product = |g: usize, h: usize| -> usize {
        let mut mult = table.borrow_mut();
        let slot = &mut mult[g * order + h];
        if *slot == u32::MAX {
            let gh: Vec<u32> = elements[h].iter().map(|&y| elements[g][y as usize]).collect();
            *slot = index[&gh];
        }
        *slot as usize
    };
    let mut generators = Vec::new();
    for perm in &perms {
        let g = index[perm] as usize;
        if g != 0 {
            generators.extend((0..n).map(|x| arrow(g, x)));
        }
    }
    generators.sort();
    generators.dedup();
    let parts = Parts {
        space: space.clone(),
        kind: "transformation/full".into(),
        arrows,
        labels: names,
        units: (0..n).map(|x| arrow(0, x)).collect(),
        inverse: (0..order * n)
            .map(|a| {
                let (g, x) = (a / n, a % n);
                arrow(inverse_elem[g], elements[g][x] as usize)
            })
            .collect(),
        generators,
    };
    FiniteGroupoid::assemble(parts, limits, |a, b| {
        // (g, y)(h, x) = (gh, x)
        let (g, h, x) = (a.index() / n, b.index() / n, b.index() % n);
        arrow(product(g, h), x)
    })
}

fn build_principal(
    space: Arc<UnitSpace>,
    letters: Vec<(String, PartialMap)>,
    limits: &Limits,
) -> Result<FiniteGroupoid> {
    let n = space.len();
    let mut labels: Vec<String> = vec!["e".into()];
    let mut label_index: HashMap<String, u32> = HashMap::from([("e".to_string(), 0)]);
    // BFS from every point; shortlex-first path names the arrow
    let mut per_source: Vec<Vec<(u32, u32)>> = Vec::with_capacity(n);
    let mut total = 0usize;
    for x in 0..n {
        let mut word: Vec<Option<String>> = vec![None; n];
        word[x] = Some(String::new());
        let mut order = vec![x as u32];
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for (lname, map) in &letters {
                if let Some(z) = map[y] {
                    let z = z as usize;
                    if word[z].is_none() {
                        let w = word[y].as_ref().unwrap();
                        word[z] = Some(if w.is_empty() { lname.clone() } else { format!("{lname}·{w}") });
                        order.push(z as u32);
                        queue.push_back(z);
                    }
                }
            }
        }
        total += order.len();
        if total > limits.max_arrows {
            return Err(Error::Resource(format!("orbit relation exceeds the cap of {} arrows", limits.max_arrows)));
        }
        order.sort();
        let row = order
            .into_iter()
            .map(|y| {
                let w = word[y as usize].take().unwrap();
                let name = if w.is_empty() { "e".to_string() } else { w };
                let id = *label_index.entry(name.clone()).or_insert_with(|| {
                    labels.push(name);
                    (labels.len() - 1) as u32
                });
                (y, id)
            })
            .collect();
        per_source.push(row);
    }
    let mut arrows = Vec::with_capacity(total);
    let mut id_of: HashMap<(u32, u32), u32> = HashMap::with_capacity(total);
    for (x, row) in per_source.iter().enumerate() {
        for &(y, label) in row {
            id_of.insert((x as u32, y), arrows.len() as u32);
            arrows.push(ArrowRecord {
                source: Word(x as u32),
                range: Word(y),
                label,
            });
        }
    }
    let lookup = |x: Word, y: Word| ArrowId(id_of[&(x.0, y.0)]);
    let mut generators = Vec::new();
    for (_, map) in &letters {
        for (x, y) in map.iter().enumerate() {
            if let Some(y) = y {
                if *y as usize != x {
                    generators.push(lookup(Word(x as u32), Word(*y)));
                }
            }
        }
    }
    generators.sort();
    generators.dedup();
    let parts = Parts {
        space: space.clone(),
        kind: "transformation/principal".into(),
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
