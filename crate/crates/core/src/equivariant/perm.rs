//! Permutations of `{0, …, n−1}` as image vectors: `p` sends `i` to `p[i]`.

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// The adjacent transposition swapping `i` and `i + 1`.
pub fn transposition(n: usize, i: usize) -> Perm {
    let mut p = identity(n);
    p.swap(i, i + 1);
    p
}

/// `p ∘ q`: apply `q` first.
pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&x| p[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Block boundaries of a Young subgroup given by block sizes.
pub fn blocks(sizes: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let r = start..start + s;
            start += s;
            r
        })
        .collect()
}

/// Generators `s_i` lying in the Young subgroup `Σ_{sizes[0]} × Σ_{sizes[1]} × ⋯`.
pub fn young_generators(sizes: &[usize]) -> Vec<bool> {
    let n: usize = sizes.iter().sum();
    let mut present = vec![true; n.saturating_sub(1)];
    for r in blocks(sizes) {
        if r.end < n && r.end > 0 {
            present[r.end - 1] = false;
        }
    }
    present
}

/// Coset representatives of `Σ_n / Young(sizes)`: permutations increasing on every block, in lex order.
pub fn shuffles(sizes: &[usize]) -> Vec<Perm> {
    let n: usize = sizes.iter().sum();
    let mut out: Vec<Perm> = all_perms(n).into_iter().filter(|p| is_shuffle(p, sizes)).collect();
    out.sort();
    out
}

pub fn is_shuffle(p: &[usize], sizes: &[usize]) -> bool {
    blocks(sizes).into_iter().all(|r| p[r].windows(2).all(|w| w[0] < w[1]))
}

/// Representative of the coset `g · Young(sizes)` increasing on each block.
pub fn coset_representative(g: &[usize], sizes: &[usize]) -> Perm {
    let mut rep = g.to_vec();
    for r in blocks(sizes) {
        rep[r].sort_unstable();
    }
    rep
}

/// All permutations of `n` in lex order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut p = identity(n);
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(shuffles(&[1, 2]).len(), 3);
        assert_eq!(shuffles(&[2, 2]).len(), 6);
        assert_eq!(shuffles(&[3, 0]), vec![identity(3)]);
    }

    #[test]
    fn composition_and_inverse() {
        let p = vec![1, 2, 0];
        assert_eq!(compose(&p, &inverse(&p)), identity(3));
        let s0 = transposition(3, 0);
        assert_eq!(compose(&s0, &s0), identity(3));
    }

    #[test]
    fn coset_factorisation() {
        let sizes = [2, 2];
        for g in all_perms(4) {
            let rep = coset_representative(&g, &sizes);
            assert!(is_shuffle(&rep, &sizes));
            let h = compose(&inverse(&rep), &g);
            // h preserves both blocks
            assert!(h[..2].iter().all(|&x| x < 2) && h[2..].iter().all(|&x| x >= 2));
        }
    }

    #[test]
    fn young_generator_masks() {
        assert_eq!(young_generators(&[1, 2]), vec![false, true]);
        assert_eq!(young_generators(&[3]), vec![true, true]);
        assert_eq!(young_generators(&[0, 3]), vec![true, true]);
    }
}
