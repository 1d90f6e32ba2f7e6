//! Execution policy for data-parallel loops.
//!
//! Hot loops (per-triple validations, per-monomial adjoint images, per-pair
//! commutators) are written as maps over independent items.  With the
//! `parallel` feature they run on the rayon thread pool when the policy is
//! [`Exec::Parallel`]; otherwise, or without the feature, they run in order on
//! the calling thread.  Results are always returned in input order, so output
//! is identical under both policies.

/// How independent work items are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    /// Use the rayon pool (falls back to sequential without the `parallel` feature).
    Parallel,
    /// Evaluate in order on the calling thread.
    Sequential,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn par_map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn par_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    par_map(exec, &idx, |&i| f(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_policies_agree() {
        let xs: Vec<u64> = (0..100).collect();
        let a = par_map(Exec::Parallel, &xs, |x| x * x);
        let b = par_map(Exec::Sequential, &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(par_range(Exec::default(), 3, |i| i + 1), vec![1, 2, 3]);
    }
}
