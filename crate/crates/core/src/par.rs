//! Data-parallel helpers. With the `parallel` feature these dispatch to rayon;
//! without it they run the same closures sequentially. Output order is the
//! input order in both cases.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Name of the active execution mode, used to label benchmarks and reports.
pub const MODE: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// First (in input order) `Some` produced by `f`.
pub fn find_map_first<T, U, F>(items: &[T], f: F) -> Option<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find_map(f)
    }
}

pub fn flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().flat_map_iter(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().flat_map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u32> = (0..1000).collect();
        assert_eq!(
            map(&xs, |x| x * 2),
            xs.iter().map(|x| x * 2).collect::<Vec<_>>()
        );
        assert_eq!(
            find_map_first(&xs, |&x| (x % 97 == 96).then_some(x)),
            Some(96)
        );
        assert_eq!(flat_map(&xs[..3], |&x| vec![x; x as usize]), vec![1, 2, 2]);
    }
}
