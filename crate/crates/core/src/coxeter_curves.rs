//! Curve systems, their right-angled Coxeter groups, and points of the
//! development `D(T̄, ι) = W × T̄ / ∼`.
//!
//! Curves that intersect generate a free product (`m = ∞`), disjoint curves
//! commute (`m = 2`). Words are reduced by cancellation across commuting
//! letters and put in the lexicographically least order of their commutation
//! class, which decides equality in `W`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cat0_engine::{glue, CuspSpace, GeodesicSpace, GlueSet, Side};
use crate::cusp_model::{self, CuspPoint, ModelParams, ProductCuspPoint};
use crate::error::{contract, domain, GeomError, Result};
use crate::torus_teich::CurveClass;

/// Named curves with pairwise geometric intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSystem {
    pub names: Vec<String>,
    intersections: Vec<Vec<u64>>,
}

impl CurveSystem {
    pub fn new(names: Vec<String>, intersections: Vec<Vec<u64>>) -> Result<Self> {
        let n = names.len();
        if intersections.len() != n || intersections.iter().any(|r| r.len() != n) {
            return contract("intersection matrix must be n×n");
        }
        for i in 0..n {
            if intersections[i][i] != 0 {
                return domain(format!("curve {} meets itself", names[i]));
            }
            for j in 0..i {
                if intersections[i][j] != intersections[j][i] {
                    return domain(format!("i({}, {}) is not symmetric", names[i], names[j]));
                }
            }
        }
        Ok(Self { names, intersections })
    }

    /// Torus classes with `i((p,q), (p',q')) = |p q' - q p'|`.
    pub fn torus(classes: &[CurveClass]) -> Self {
        let names = classes.iter().map(ToString::to_string).collect();
        let intersections =
            classes.iter().map(|a| classes.iter().map(|b| a.intersection(b)).collect()).collect();
        Self { names, intersections }
    }

    /// Genus two: pants curves `c1, c2, c3` (`c2` separating) and transverse
    /// curves `d1, d2`, with `i(c1,d1) = 1`, `i(c2,d2) = 2`, `i(d1,d2) = 1`
    /// and all other pairs disjoint.
    pub fn genus_two() -> Self {
        let names = ["c1", "c2", "c3", "d1", "d2"].map(String::from).to_vec();
        let mut m = vec![vec![0; 5]; 5];
        for (a, b, i) in [(0, 3, 1), (1, 4, 2), (3, 4, 1)] {
            m[a][b] = i;
            m[b][a] = i;
        }
        Self { names, intersections: m }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn intersection(&self, a: usize, b: usize) -> u64 {
        self.intersections[a][b]
    }

    /// `n`, then lines `s s' i` (0-based indices) for every pair.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let bad = |msg: String| GeomError::Parse(msg);
        let n: usize = lines
            .next()
            .ok_or_else(|| bad("empty curve file".into()))?
            .parse()
            .map_err(|e| bad(format!("curve count: {e}")))?;
        let mut m = vec![vec![0u64; n]; n];
        let mut seen = 0;
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(format!("expected `s s' i`, got `{line}`")));
            }
            let p = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("`{line}`: {e}")));
            let (a, b, i) = (p(f[0])? as usize, p(f[1])? as usize, p(f[2])?);
            if a >= n || b >= n || a == b {
                return Err(bad(format!("bad pair in `{line}`")));
            }
            m[a][b] = i;
            m[b][a] = i;
            seen += 1;
        }
        if seen != n * n.saturating_sub(1) / 2 {
            return Err(bad(format!("expected {} pair lines, got {seen}", n * n.saturating_sub(1) / 2)));
        }
        Self::new((0..n).map(|k| format!("s{k}")).collect(), m)
    }
}

/// A Coxeter matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoxeterEntry {
    Finite(u32),
    Infinite,
}

impl fmt::Display for CoxeterEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(m) => write!(f, "{m}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterMatrix {
    entries: Vec<Vec<CoxeterEntry>>,
}

impl CoxeterMatrix {
    pub fn new(entries: Vec<Vec<CoxeterEntry>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return contract("Coxeter matrix must be square");
        }
        for i in 0..n {
            if entries[i][i] != CoxeterEntry::Finite(1) {
                return domain("Coxeter matrix diagonal must be 1");
            }
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return domain("Coxeter matrix must be symmetric");
                }
                if let CoxeterEntry::Finite(m) = entries[i][j] {
                    if m < 2 {
                        return domain("off-diagonal Coxeter entries must be at least 2");
                    }
                }
            }
        }
        Ok(Self { entries })
    }

    /// The right-angled matrix on `n` generators with the given commuting pairs.
    pub fn right_angled(n: usize, commuting: &[(usize, usize)]) -> Result<Self> {
        let mut e = vec![vec![CoxeterEntry::Infinite; n]; n];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = CoxeterEntry::Finite(1);
        }
        for &(a, b) in commuting {
            if a >= n || b >= n || a == b {
                return contract(format!("bad commuting pair ({a}, {b})"));
            }
            e[a][b] = CoxeterEntry::Finite(2);
            e[b][a] = CoxeterEntry::Finite(2);
        }
        Ok(Self { entries: e })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, a: usize, b: usize) -> CoxeterEntry {
        self.entries[a][b]
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.entries[a][b] == CoxeterEntry::Finite(2)
    }

    pub fn is_right_angled(&self) -> bool {
        self.entries.iter().flatten().all(|e| matches!(e, CoxeterEntry::Finite(1 | 2) | CoxeterEntry::Infinite))
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }
}

/// `m(s,s) = 1`; `m(s,s') = 2` if the curves are disjoint, `∞` otherwise.
pub fn coxeter_matrix(cs: &CurveSystem) -> CoxeterMatrix {
    let n = cs.len();
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, cs.intersection(i, j)) {
                    (true, _) => CoxeterEntry::Finite(1),
                    (false, 0) => CoxeterEntry::Finite(2),
                    _ => CoxeterEntry::Infinite,
                })
                .collect()
        })
        .collect();
    CoxeterMatrix { entries }
}

/// A word in the generators (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every generator is an involution, so `w⁻¹` is `w` reversed.
    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Parses `s1,s2,s1` or `1,2,1` (0-based either way).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(Self::identity());
        }
        text.split(',')
            .map(|t| {
                let t = t.trim();
                t.strip_prefix('s')
                    .unwrap_or(t)
                    .parse::<usize>()
                    .map_err(|e| GeomError::Parse(format!("generator `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.0.iter().map(|s| format!("s{s}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Normal form in a right-angled Coxeter group.
///
/// Letters are pushed one at a time; a new letter cancels the last equal
/// letter reachable across commuting letters. The reduced word is then
/// rewritten as the lexicographically least word of its commutation class by
/// repeatedly emitting the smallest letter that commutes with everything
/// before it.
pub fn reduce_word(w: &Word, m: &CoxeterMatrix) -> Result<Word> {
    if !m.is_right_angled() {
        return Err(GeomError::Unsupported("word reduction needs a right-angled Coxeter matrix".into()));
    }
    let n = m.rank();
    if let Some(bad) = w.0.iter().find(|&&s| s >= n) {
        return contract(format!("generator {bad} out of range for rank {n}"));
    }
    let mut reduced: Vec<usize> = Vec::with_capacity(w.len());
    for &s in &w.0 {
        let mut cancel = None;
        for (j, &t) in reduced.iter().enumerate().rev() {
            if t == s {
                cancel = Some(j);
                break;
            }
            if !m.commute(s, t) {
                break;
            }
        }
        match cancel {
            Some(j) => {
                reduced.remove(j);
            }
            None => reduced.push(s),
        }
    }
    let mut out = Vec::with_capacity(reduced.len());
    while !reduced.is_empty() {
        let mut pick: Option<usize> = None;
        for k in 0..reduced.len() {
            let s = reduced[k];
            if reduced[..k].iter().all(|&t| m.commute(s, t)) && pick.is_none_or(|p| s < reduced[p]) {
                pick = Some(k);
            }
        }
        let k = pick.unwrap_or(0);
        out.push(reduced.remove(k));
    }
    Ok(Word(out))
}

/// Result of [`enumerate_group`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupEnumeration {
    /// Normal forms in shortlex order.
    pub elements: Vec<Word>,
    /// Number of elements of each length `0..=max_len`.
    pub growth: Vec<usize>,
    /// `Some(order)` when no element has a longer extension.
    pub order: Option<usize>,
}

/// Upper bound on the number of elements [`enumerate_group`] will produce.
pub const ENUMERATION_LIMIT: usize = 1_000_000;

/// All normal forms of length `≤ max_len` (at most 12), level by level.
pub fn enumerate_group(m: &CoxeterMatrix, max_len: usize) -> Result<GroupEnumeration> {
    if max_len > 12 {
        return contract(format!("max_len {max_len} exceeds 12"));
    }
    let n = m.rank();
    let extend = |level: &[Word]| -> Result<Vec<Word>> {
        let sets: Vec<BTreeSet<Word>> = level
            .par_iter()
            .map(|w| {
                let mut out = BTreeSet::new();
                for s in 0..n {
                    let mut v = w.0.clone();
                    v.push(s);
                    let r = reduce_word(&Word(v), m)?;
                    if r.len() == w.len() + 1 {
                        out.insert(r);
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(sets.into_iter().flatten().collect::<BTreeSet<_>>().into_iter().collect())
    };
    let mut elements = vec![Word::identity()];
    let mut growth = vec![1];
    let mut level = vec![Word::identity()];
    for _ in 0..max_len {
        level = extend(&level)?;
        if level.is_empty() {
            break;
        }
        if elements.len() + level.len() > ENUMERATION_LIMIT {
            return Err(GeomError::Unsupported(format!("more than {ENUMERATION_LIMIT} elements")));
        }
        growth.push(level.len());
        elements.extend(level.iter().cloned());
    }
    let closed = level.is_empty() || extend(&level)?.is_empty();
    let order = closed.then_some(elements.len());
    Ok(GroupEnumeration { elements, growth, order })
}

/// A point `[g, y]` of the development. The base point lives in the product
/// cusp model whose factor `j` is transverse to the stratum of generator `j`;
/// `σ(y)` is the set of factors sitting on their stratum (`u = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DevelopmentPoint {
    pub g: Word,
    pub y: ProductCuspPoint,
}

impl DevelopmentPoint {
    pub fn new(g: Word, y: ProductCuspPoint) -> Self {
        Self { g, y }
    }

    pub fn sigma(&self) -> Vec<usize> {
        self.y.factors.iter().enumerate().filter(|(_, p)| p.is_stratum()).map(|(j, _)| j).collect()
    }

    /// `s·[g, y] = [s g, y]`.
    pub fn act(&self, s: &Word) -> Self {
        Self { g: s.concat(&self.g), y: self.y.clone() }
    }
}

/// The local model of the development near a stratum: a right-angled
/// Coxeter matrix whose generator `j` reflects factor `j` of the product cusp
/// model across its stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct Development {
    pub matrix: CoxeterMatrix,
    pub params: ModelParams,
}

impl Development {
    pub fn new(matrix: CoxeterMatrix, params: ModelParams) -> Result<Self> {
        if !matrix.is_right_angled() {
            return Err(GeomError::Unsupported("developments need right-angled Coxeter groups".into()));
        }
        Ok(Self { matrix, params })
    }

    fn check(&self, p: &DevelopmentPoint) -> Result<()> {
        if p.y.k() != self.matrix.rank() {
            return domain(format!("point has {} factors, curve system has {}", p.y.k(), self.matrix.rank()));
        }
        let sigma = p.sigma();
        for (i, &a) in sigma.iter().enumerate() {
            for &b in &sigma[..i] {
                if !self.matrix.commute(a, b) {
                    return domain(format!("σ(y) = {sigma:?} is not a simplex"));
                }
            }
        }
        Ok(())
    }

    /// `(g, y) ∼ (g', y')` iff `y = y'` and `g⁻¹ g' ∈ W_σ(y)`.
    pub fn dev_equal(&self, p: &DevelopmentPoint, q: &DevelopmentPoint) -> Result<bool> {
        self.check(p)?;
        self.check(q)?;
        if p.y != q.y {
            return Ok(false);
        }
        let sigma = p.sigma();
        let w = reduce_word(&p.g.inverse().concat(&q.g), &self.matrix)?;
        Ok(w.0.iter().all(|s| sigma.contains(s)))
    }

    /// Distance between points in the same or adjacent copies.
    ///
    /// With `w` the normal form of `g_p⁻¹ g_q`: `w = e` gives the model
    /// distance; `w` a product of distinct commuting generators means the
    /// copies share the stratum of every letter of `w`. Factors reflected by
    /// `w` are cusp pairs glued at their stratum point, the others are
    /// ordinary model factors, and the product combines them.
    pub fn dev_distance(&self, p: &DevelopmentPoint, q: &DevelopmentPoint) -> Result<f64> {
        self.check(p)?;
        self.check(q)?;
        let w = reduce_word(&p.g.inverse().concat(&q.g), &self.matrix)?;
        for (i, &a) in w.0.iter().enumerate() {
            for &b in &w.0[..i] {
                if !self.matrix.commute(a, b) {
                    return Err(GeomError::Unsupported(format!("copies {} and {} are not adjacent", p.g, q.g)));
                }
            }
        }
        let space = CuspSpace { params: self.params };
        let pair = glue(space, space, GlueSet::point(CuspPoint::stratum(), CuspPoint::stratum()))?;
        let mut total = 0.0f64;
        for (j, (a, b)) in p.y.factors.iter().zip(&q.y.factors).enumerate() {
            let d = if w.0.contains(&j) {
                pair.distance(&Side::Left(*a), &Side::Right(*b))?
            } else {
                cusp_model::cusp_distance(a, b, &self.params)
            };
            total = total.hypot(d);
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ra(n: usize, commuting: &[(usize, usize)]) -> CoxeterMatrix {
        CoxeterMatrix::right_angled(n, commuting).unwrap()
    }

    #[test]
    fn matrices_from_curves() {
        let t = CurveSystem::torus(&[CurveClass::new(1, 0).unwrap(), CurveClass::new(0, 1).unwrap()]);
        let m = coxeter_matrix(&t);
        assert_eq!(m.get(0, 1), CoxeterEntry::Infinite);
        assert_eq!(m.get(0, 0), CoxeterEntry::Finite(1));
        let g2 = coxeter_matrix(&CurveSystem::genus_two());
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(g2.get(a, b), CoxeterEntry::Finite(2));
        }
        assert_eq!(g2.get(0, 3), CoxeterEntry::Infinite);
    }

    #[test]
    fn reduction_examples() {
        let free = ra(2, &[]);
        let comm = ra(2, &[(0, 1)]);
        assert_eq!(reduce_word(&Word(vec![0, 0]), &free).unwrap(), Word::identity());
        assert_eq!(reduce_word(&Word(vec![0, 1, 0]), &comm).unwrap(), Word(vec![1]));
        assert_eq!(reduce_word(&Word(vec![0, 1, 0]), &free).unwrap(), Word(vec![0, 1, 0]));
        assert_eq!(reduce_word(&Word(vec![1, 0]), &comm).unwrap(), Word(vec![0, 1]));
        let three = CoxeterMatrix::new(vec![
            vec![CoxeterEntry::Finite(1), CoxeterEntry::Finite(3)],
            vec![CoxeterEntry::Finite(3), CoxeterEntry::Finite(1)],
        ])
        .unwrap();
        assert!(matches!(reduce_word(&Word(vec![0]), &three), Err(GeomError::Unsupported(_))));
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_group(&ra(3, &[(0, 1), (0, 2), (1, 2)]), 8).unwrap();
        assert_eq!(e.order, Some(8));
        assert_eq!(e.growth, vec![1, 3, 3, 1]);
        assert_eq!(enumerate_group(&ra(1, &[]), 5).unwrap().order, Some(2));
        let d = enumerate_group(&ra(2, &[]), 6).unwrap();
        assert_eq!(d.order, None);
        assert_eq!(d.growth, vec![1, 2, 2, 2, 2, 2, 2]);
        assert!(enumerate_group(&ra(2, &[]), 13).is_err());
    }

    #[test]
    fn word_text() {
        assert_eq!(Word::parse("s1,s2,s1").unwrap(), Word(vec![1, 2, 1]));
        assert_eq!(Word::parse("0, 2").unwrap().to_string(), "s0,s2");
        assert_eq!(Word::parse("e").unwrap(), Word::identity());
        assert!(Word::parse("x").is_err());
    }

    #[test]
    fn curve_file() {
        let cs = CurveSystem::from_text("3\n0 1 0\n0 2 1\n1 2 0\n").unwrap();
        let m = coxeter_matrix(&cs);
        assert!(m.commute(0, 1) && !m.commute(0, 2));
        assert!(CurveSystem::from_text("3\n0 1 0\n").is_err());
    }

    #[test]
    fn development_equality_and_reflection() {
        let params = ModelParams::default();
        let dev = Development::new(ra(2, &[(0, 1)]), params).unwrap();
        let on_wall =
            ProductCuspPoint::new(vec![CuspPoint::stratum(), CuspPoint::new(0.4, 0.2).unwrap()]).unwrap();
        let e = DevelopmentPoint::new(Word::identity(), on_wall.clone());
        assert!(dev.dev_equal(&e, &e.act(&Word(vec![0]))).unwrap());
        assert!(!dev.dev_equal(&e, &e.act(&Word(vec![1]))).unwrap());
        let y = ProductCuspPoint::new(vec![CuspPoint::new(0.3, 0.0).unwrap(), CuspPoint::new(0.5, 1.0).unwrap()])
            .unwrap();
        let p = DevelopmentPoint::new(Word::identity(), y);
        let d = dev.dev_distance(&p, &p.act(&Word(vec![0]))).unwrap();
        assert!((d - 2.0 * 0.3 * params.c()).abs() < 1e-12);
        assert_eq!(dev.dev_distance(&p, &p).unwrap(), 0.0);
    }
}
