use crate::error::{invalid, Result};

/// Round-robin dispensing of `colors` over `sizes`, which must be
/// nonincreasing. Returns the color sequence of each set, in position order.
pub fn cyclic_coloring(sizes: &[usize], colors: &[u32]) -> Result<Vec<Vec<u32>>> {
    if sizes.windows(2).any(|w| w[0] < w[1]) {
        return invalid(format!("set sizes must be nonincreasing, got {sizes:?}"));
    }
    let total: usize = sizes.iter().sum();
    if colors.len() < total {
        return invalid(format!("{} colors cannot cover {total} vertices", colors.len()));
    }
    let mut out: Vec<Vec<u32>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    let mut next = colors.iter();
    for round in 0..sizes.first().copied().unwrap_or(0) {
        for (i, &s) in sizes.iter().enumerate() {
            if round < s {
                out[i].push(*next.next().unwrap());
            }
        }
    }
    Ok(out)
}

/// Stable order of set indices by size descending, ties by index.
pub fn sort_for_cyclic(sizes: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..sizes.len()).collect();
    perm.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]));
    perm
}

/// Sorts the sets, colors them, and returns the sequences in the caller's
/// original order together with the sorting permutation.
pub fn cyclic_coloring_unsorted(sizes: &[usize], colors: &[u32]) -> Result<(Vec<Vec<u32>>, Vec<usize>)> {
    let perm = sort_for_cyclic(sizes);
    let sorted: Vec<usize> = perm.iter().map(|&i| sizes[i]).collect();
    let seqs = cyclic_coloring(&sorted, colors)?;
    let mut out = vec![Vec::new(); sizes.len()];
    for (seq, &i) in seqs.into_iter().zip(&perm) {
        out[i] = seq;
    }
    Ok((out, perm))
}
