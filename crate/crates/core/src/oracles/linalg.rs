/// Rank over the rationals of integer row vectors, by fraction-free
/// elimination with gcd reduction (so entries stay small and exact).
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = a.iter().map(Vec::len).max().unwrap_or(0);
    for row in &mut a {
        row.resize(cols, 0);
    }
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..a.len() {
            let factor = a[r][col];
            if factor == 0 {
                continue;
            }
            let lead = a[rank][col];
            let (head, tail) = a.split_at_mut(r);
            let src = &head[rank];
            let dst = &mut tail[0];
            for (d, s) in dst.iter_mut().zip(src) {
                *d = lead * *d - factor * *s;
            }
            let g = dst.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                dst.iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(integer_rank(&[]), 0);
        assert_eq!(integer_rank(&[vec![0, 0]]), 0);
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(
            integer_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, -1]]),
            2
        );
        assert_eq!(
            integer_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
            3
        );
        let identity: Vec<Vec<i64>> = (0..16)
            .map(|i| (0..16).map(|j| (i == j) as i64).collect())
            .collect();
        assert_eq!(integer_rank(&identity), 16);
    }
}
