//! Small helpers around ordered vertex sets.

use std::collections::BTreeSet;
use std::fmt::Write;

/// An ordered set of dense vertex ids.
pub type VertexSet = BTreeSet<usize>;

/// Renders a set as `{a,b,c}` with no whitespace.
pub fn fmt_set<'a, I>(items: I) -> String
where
    I: IntoIterator<Item = &'a usize>,
{
    let mut out = String::from("{");
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{x}").unwrap();
    }
    out.push('}');
    out
}

/// Parses the `{a,b,c}` rendering produced by [`fmt_set`].
pub fn parse_set(text: &str) -> Option<VertexSet> {
    let inner = text.strip_prefix('{')?.strip_suffix('}')?;
    let mut set = VertexSet::new();
    if inner.trim().is_empty() {
        return Some(set);
    }
    for part in inner.split(',') {
        set.insert(part.trim().parse().ok()?);
    }
    Some(set)
}

/// Iterates all subsets of `universe` with at most `max` elements, in order of
/// increasing size and lexicographically within each size.
pub fn subsets_up_to(universe: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 0..=max.min(universe.len()) {
        for_each_combination(universe.len(), size, |idx| {
            out.push(idx.iter().map(|&i| universe[i]).collect());
            true
        });
    }
    out
}

/// Calls `f` on every `k`-combination of `0..n` (as sorted index slices) in
/// lexicographic order. Stops early when `f` returns `false`.
pub fn for_each_combination<F>(n: usize, k: usize, mut f: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_text_round_trip() {
        let s: VertexSet = [3, 1, 7].into_iter().collect();
        assert_eq!(fmt_set(&s), "{1,3,7}");
        assert_eq!(parse_set("{1,3,7}"), Some(s));
        assert_eq!(parse_set("{}"), Some(VertexSet::new()));
        assert_eq!(parse_set("1,2"), None);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut zero = 0;
        for_each_combination(3, 0, |c| {
            assert!(c.is_empty());
            zero += 1;
            true
        });
        assert_eq!(zero, 1);
        assert_eq!(subsets_up_to(&[5, 9], 2).len(), 4);
    }
}
