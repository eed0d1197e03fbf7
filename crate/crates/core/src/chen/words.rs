//! Flat indexing of words over an `n`-letter alphabet, shortest first.

/// Number of words of length ≤ `order`.
pub fn word_count(n: usize, order: usize) -> usize {
    (0..=order).map(|r| n.pow(r as u32)).sum()
}

/// Index of the first word of length `len`.
pub fn length_offset(n: usize, len: usize) -> usize {
    word_count(n, len) - n.pow(len as u32)
}

pub fn word_index(n: usize, word: &[usize]) -> usize {
    let mut digits = 0usize;
    for &a in word {
        debug_assert!(a < n);
        digits = digits * n + a;
    }
    length_offset(n, word.len()) + digits
}

pub fn word_at(n: usize, mut index: usize) -> Vec<usize> {
    let mut len = 0;
    loop {
        let block = n.pow(len as u32);
        if index < block {
            break;
        }
        index -= block;
        len += 1;
    }
    let mut word = vec![0; len];
    for slot in word.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    word
}

/// All words of length exactly `len`, in index order.
pub fn words_of_length(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let start = length_offset(n, len);
    (start..start + n.pow(len as u32)).map(move |i| word_at(n, i))
}

/// All words of length ≤ `order`, in index order.
pub fn all_words(n: usize, order: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..word_count(n, order)).map(move |i| word_at(n, i))
}

/// Shuffles of `u` and `v`, with multiplicity.
pub fn shuffles(u: &[usize], v: &[usize]) -> Vec<Vec<usize>> {
    if u.is_empty() {
        return vec![v.to_vec()];
    }
    if v.is_empty() {
        return vec![u.to_vec()];
    }
    let mut out = Vec::new();
    for mut w in shuffles(&u[..u.len() - 1], v) {
        w.push(u[u.len() - 1]);
        out.push(w);
    }
    for mut w in shuffles(u, &v[..v.len() - 1]) {
        w.push(v[v.len() - 1]);
        out.push(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for n in 1..4 {
            for (i, w) in all_words(n, 4).enumerate() {
                assert_eq!(word_index(n, &w), i);
            }
        }
        assert_eq!(word_count(2, 3), 15);
        assert_eq!(word_at(3, 0), Vec::<usize>::new());
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(&[0, 1], &[2]).len(), 3);
        assert_eq!(shuffles(&[0, 1], &[2, 3]).len(), 6);
        assert_eq!(shuffles(&[], &[1]), vec![vec![1]]);
    }
}
