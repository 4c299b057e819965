//! Sequential / data-parallel execution of ordered searches.
//!
//! Both modes return the *first* index (in slice order) satisfying the
//! predicate, so results do not depend on scheduling. The parallel mode is
//! only available with the `parallel` feature; without it `Exec::Parallel`
//! silently runs sequentially.

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Index of the first item for which `pred` returns `Ok(true)` or an
    /// error. An error at that index is propagated.
    pub fn find_first<T, F>(self, items: &[T], pred: F) -> Result<Option<usize>>
    where
        T: Sync,
        F: Fn(&T) -> Result<bool> + Sync + Send,
    {
        let hit = |item: &T| -> Option<Result<()>> {
            match pred(item) {
                Ok(true) => Some(Ok(())),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        };
        let found = if self.is_parallel() {
            par_first(items, &hit)
        } else {
            items.iter().enumerate().find_map(|(i, it)| hit(it).map(|r| (i, r)))
        };
        match found {
            None => Ok(None),
            Some((i, Ok(()))) => Ok(Some(i)),
            Some((_, Err(e))) => Err(e),
        }
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        if self.is_parallel() {
            par_map(items, &f)
        } else {
            items.iter().map(f).collect()
        }
    }
}

/// Execution mode plus the budget every expensive step is charged against.
#[derive(Debug, Default)]
pub struct SearchConfig {
    pub exec: Exec,
    pub budget: crate::budget::Budget,
}

impl SearchConfig {
    pub fn new(exec: Exec, budget: crate::budget::Budget) -> Self {
        SearchConfig { exec, budget }
    }

    pub fn sequential() -> Self {
        Self::new(Exec::Sequential, crate::budget::Budget::default())
    }
}

#[cfg(feature = "parallel")]
fn par_first<T, R, F>(items: &[T], hit: &F) -> Option<(usize, R)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync,
{
    use rayon::prelude::*;
    items
        .par_iter()
        .enumerate()
        .find_map_first(|(i, it)| hit(it).map(|r| (i, r)))
}

#[cfg(not(feature = "parallel"))]
fn par_first<T, R, F>(items: &[T], hit: &F) -> Option<(usize, R)>
where
    F: Fn(&T) -> Option<R>,
{
    items.iter().enumerate().find_map(|(i, it)| hit(it).map(|r| (i, r)))
}

#[cfg(feature = "parallel")]
fn par_map<T, U, F>(items: &[T], f: &F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, U, F>(items: &[T], f: &F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn first_hit_is_leftmost_in_both_modes() {
        let items: Vec<u32> = (0..10_000).collect();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let i = exec.find_first(&items, |&x| Ok(x % 997 == 996)).unwrap();
            assert_eq!(i, Some(996));
            assert_eq!(exec.find_first(&items, |_| Ok(false)).unwrap(), None);
        }
    }

    #[test]
    fn error_at_first_hit_propagates() {
        let items: Vec<u32> = (0..100).collect();
        let r = Exec::Sequential.find_first(&items, |&x| {
            if x == 5 {
                Err(Error::BudgetExceeded("test".into()))
            } else {
                Ok(x == 50)
            }
        });
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }
}
