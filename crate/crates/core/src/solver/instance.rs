//! Problem instances and per-set bipartitions.

use nalgebra::DMatrix;

use crate::error::SolveError;
use crate::scalar::{rat_to_f64, Rat};

/// One problem instance: k+1 labeled sets of exactly d−k+2 points in R^d.
/// Coordinates are exact rationals; a float view is cached for the search.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    d: usize,
    k: usize,
    sets: Vec<Vec<Vec<Rat>>>,
    sets_float: Vec<DMatrix<f64>>,
}

impl Instance {
    pub fn new(d: usize, k: usize, sets: Vec<Vec<Vec<Rat>>>) -> Result<Self, SolveError> {
        if d == 0 {
            return Err(SolveError::InvalidInstance("d must be positive".into()));
        }
        if k >= d {
            return Err(SolveError::InvalidInstance(format!(
                "k must satisfy 0 <= k <= d-1, got k={k}, d={d}"
            )));
        }
        if sets.len() != k + 1 {
            return Err(SolveError::InvalidInstance(format!(
                "expected {} sets, got {}",
                k + 1,
                sets.len()
            )));
        }
        let per_set = d - k + 2;
        for (i, set) in sets.iter().enumerate() {
            if set.len() != per_set {
                return Err(SolveError::InvalidInstance(format!(
                    "set {i} has {} points, expected {per_set}",
                    set.len()
                )));
            }
            for (a, p) in set.iter().enumerate() {
                if p.len() != d {
                    return Err(SolveError::InvalidInstance(format!(
                        "point {a} of set {i} has dimension {}, expected {d}",
                        p.len()
                    )));
                }
            }
        }
        let sets_float: Vec<DMatrix<f64>> = sets
            .iter()
            .map(|set| DMatrix::from_fn(d, per_set, |row, col| rat_to_f64(&set[col][row])))
            .collect();
        if sets_float.iter().any(|m| m.iter().any(|x| !x.is_finite())) {
            return Err(SolveError::InvalidInstance(
                "coordinates overflow f64 range".into(),
            ));
        }
        Ok(Instance {
            d,
            k,
            sets,
            sets_float,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of points per set, d−k+2.
    pub fn points_per_set(&self) -> usize {
        self.d - self.k + 2
    }

    pub fn sets(&self) -> &[Vec<Vec<Rat>>] {
        &self.sets
    }

    /// Float view of set i: one d×(d−k+2) matrix, points as columns.
    pub fn set_float(&self, i: usize) -> &DMatrix<f64> {
        &self.sets_float[i]
    }

    /// Applies the exact affine map x ↦ Ax + t to every point.
    pub fn transformed(&self, a: &crate::exact::RatMat, t: &[Rat]) -> Result<Self, SolveError> {
        assert_eq!(a.nrows(), self.d);
        assert_eq!(a.ncols(), self.d);
        assert_eq!(t.len(), self.d);
        let sets = self
            .sets
            .iter()
            .map(|set| {
                set.iter()
                    .map(|p| crate::exact::add(&a.mat_vec(p), t))
                    .collect()
            })
            .collect();
        Instance::new(self.d, self.k, sets)
    }
}

/// An unordered split of one set into two disjoint nonempty index lists.
/// Canonical form: indices sorted ascending, and the part containing the
/// smallest participating index listed first. The union may omit indices
/// (disjoint-faces mode): hull monotonicity keeps any certificate valid when
/// parts are enlarged.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSplit {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl SetSplit {
    pub fn new(mut first: Vec<usize>, mut second: Vec<usize>) -> Self {
        first.sort_unstable();
        second.sort_unstable();
        let swap = match (first.first(), second.first()) {
            (Some(a), Some(b)) => b < a,
            _ => false,
        };
        if swap {
            std::mem::swap(&mut first, &mut second);
        }
        SetSplit { first, second }
    }

    /// Checks disjointness, nonemptiness and index range; `cover` additionally
    /// requires the union to be all of 0..n (partition mode).
    pub fn validate(&self, n: usize, cover: bool) -> Result<(), String> {
        if self.first.is_empty() || self.second.is_empty() {
            return Err("both parts must be nonempty".into());
        }
        let mut seen = vec![false; n];
        for &idx in self.first.iter().chain(&self.second) {
            if idx >= n {
                return Err(format!("index {idx} out of range (set size {n})"));
            }
            if seen[idx] {
                return Err(format!("index {idx} appears twice"));
            }
            seen[idx] = true;
        }
        if cover && !seen.iter().all(|&b| b) {
            return Err("parts must cover every index in partition mode".into());
        }
        Ok(())
    }

    /// Same unordered pair of parts.
    pub fn same_split(&self, other: &SetSplit) -> bool {
        let a = SetSplit::new(self.first.clone(), self.second.clone());
        let b = SetSplit::new(other.first.clone(), other.second.clone());
        a == b
    }
}

/// One split per set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub splits: Vec<SetSplit>,
}

impl Bipartition {
    pub fn validate(&self, instance: &Instance, cover: bool) -> Result<(), String> {
        if self.splits.len() != instance.k() + 1 {
            return Err(format!(
                "expected {} splits, got {}",
                instance.k() + 1,
                self.splits.len()
            ));
        }
        let n = instance.points_per_set();
        for (i, s) in self.splits.iter().enumerate() {
            s.validate(n, cover).map_err(|e| format!("set {i}: {e}"))?;
        }
        Ok(())
    }
}

/// All unordered bipartitions of {0..n} into two nonempty covering parts, in
/// deterministic order (the part containing index 0 first, masks ascending).
pub fn all_covering_splits(n: usize) -> Vec<SetSplit> {
    assert!(n >= 2 && n < usize::BITS as usize);
    let mut out = Vec::with_capacity((1usize << (n - 1)) - 1);
    for mask in 1..(1u64 << n) {
        if mask & 1 == 0 {
            continue; // index 0 always in the first part: each unordered pair once
        }
        let first: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let second: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
        if second.is_empty() {
            continue;
        }
        out.push(SetSplit { first, second });
    }
    out
}
