//! Sequential and data-parallel execution of exhaustive scans.
//!
//! Every quantified check in the crate is a scan over a mixed-radix grid of
//! indices. [`Exec`] decides whether the scan runs on the rayon pool or on
//! the calling thread. Without the `parallel` feature both modes run
//! sequentially. Results never depend on the mode: searches return the
//! lowest grid index that matches, which keeps witnesses reproducible.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Scans shorter than this stay on the calling thread even in parallel
/// mode; splitting them costs more than it saves.
pub const PAR_MIN: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when scans actually fan out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// First index in `0..n` for which `f` returns `Some`, with its value.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && n >= PAR_MIN {
            return (0..n).into_par_iter().find_map_first(f);
        }
        (0..n).find_map(f)
    }

    /// `f(i)` for every `i` in `0..n`, in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && n >= PAR_MIN {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Number of indices in `0..n` satisfying `pred`.
    pub fn count<F>(self, n: usize, pred: F) -> usize
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && n >= PAR_MIN {
            return (0..n).into_par_iter().filter(|&i| pred(i)).count();
        }
        (0..n).filter(|&i| pred(i)).count()
    }

    /// Scans the grid `dims[0] × dims[1] × …` in lexicographic order
    /// (first coordinate most significant) and returns the first point at
    /// which `holds` is false.
    pub fn first_violation<F>(self, dims: &[usize], holds: F) -> Option<Vec<usize>>
    where
        F: Fn(&[usize]) -> bool + Sync + Send,
    {
        let total = grid_size(dims)?;
        self.find_first(total, |i| {
            let point = decode(i, dims);
            (!holds(&point)).then_some(point)
        })
    }

    /// First grid point (lexicographic) for which `f` yields a value.
    pub fn first_in_grid<T, F>(self, dims: &[usize], f: F) -> Option<T>
    where
        T: Send,
        F: Fn(&[usize]) -> Option<T> + Sync + Send,
    {
        let total = grid_size(dims)?;
        self.find_first(total, |i| f(&decode(i, dims)))
    }
}

/// Number of points in a grid, `None` when a dimension is empty.
pub fn grid_size(dims: &[usize]) -> Option<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&n| n > 0)
}

/// Mixed-radix decoding with the first coordinate most significant.
pub fn decode(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut point = vec![0; dims.len()];
    for (slot, &d) in point.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_is_lexicographic() {
        let dims = [2, 3];
        let pts: Vec<_> = (0..6).map(|i| decode(i, &dims)).collect();
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[1], vec![0, 1]);
        assert_eq!(pts[3], vec![1, 0]);
        assert_eq!(pts[5], vec![1, 2]);
    }

    #[test]
    fn modes_agree_on_first_violation() {
        let dims = [7, 5, 4];
        let holds = |p: &[usize]| !(p[0] >= 3 && p[1] == 2 && p[2] % 2 == 1);
        let a = Exec::Sequential.first_violation(&dims, holds);
        let b = Exec::Parallel.first_violation(&dims, holds);
        assert_eq!(a, Some(vec![3, 2, 1]));
        assert_eq!(a, b);
    }

    #[test]
    fn empty_grid_has_no_violation() {
        assert_eq!(Exec::Parallel.first_violation(&[3, 0], |_| false), None);
        assert_eq!(grid_size(&[]), Some(1));
    }

    #[test]
    fn count_and_map() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.count(10, |i| i % 3 == 0), 4);
            assert_eq!(exec.map(4, |i| i * i), vec![0, 1, 4, 9]);
        }
    }
}
