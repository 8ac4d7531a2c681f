//! All lattices with at most five elements, up to isomorphism.
//!
//! Elements are numbered along a linear extension of the order, so `0` is
//! the bottom and `n-1` the top.

/// A finite lattice as `(join, meet)` tables, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub name: &'static str,
    pub n: usize,
    pub join: Vec<usize>,
    pub meet: Vec<usize>,
}

impl Lattice {
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.meet[x * self.n + y] == x
    }

    /// Order automorphisms. Lattice isomorphisms are exactly the order
    /// isomorphisms, so these also preserve join and meet.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(self.n);
        let mut used = vec![false; self.n];
        self.extend_automorphism(&mut perm, &mut used, &mut out);
        out
    }

    fn extend_automorphism(&self, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let x = perm.len();
        if x == self.n {
            out.push(perm.clone());
            return;
        }
        for image in 0..self.n {
            if used[image] {
                continue;
            }
            let fits = (0..x).all(|y| self.leq(y, x) == self.leq(perm[y], image) && self.leq(x, y) == self.leq(image, perm[y]));
            if fits {
                used[image] = true;
                perm.push(image);
                self.extend_automorphism(perm, used, out);
                perm.pop();
                used[image] = false;
            }
        }
    }
}

/// Builds the lattice generated by the covering pairs `(lower, upper)`.
fn from_covers(name: &'static str, n: usize, covers: &[(usize, usize)]) -> Lattice {
    let mut leq = vec![false; n * n];
    for x in 0..n {
        leq[x * n + x] = true;
    }
    for &(a, b) in covers {
        leq[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i * n + k] && leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    let bound = |x: usize, y: usize, upper: bool| -> usize {
        let ok = |z: usize| if upper { leq[x * n + z] && leq[y * n + z] } else { leq[z * n + x] && leq[z * n + y] };
        let cands: Vec<usize> = (0..n).filter(|&z| ok(z)).collect();
        *cands
            .iter()
            .find(|&&z| cands.iter().all(|&w| if upper { leq[z * n + w] } else { leq[w * n + z] }))
            .expect("catalog entries are lattices")
    };
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            join[x * n + y] = bound(x, y, true);
            meet[x * n + y] = bound(x, y, false);
        }
    }
    Lattice { name, n, join, meet }
}

/// `0 < 1 < … < n-1` as `(join, meet)`.
pub fn chain(n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            join[x * n + y] = x.max(y);
            meet[x * n + y] = x.min(y);
        }
    }
    (join, meet)
}

/// The lattices of size `n` (1 ≤ n ≤ 5), chain first.
pub fn catalog(n: usize) -> Vec<Lattice> {
    assert!((1..=5).contains(&n), "the lattice catalog covers sizes 1 to 5");
    let chain_covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let mut out = vec![from_covers("chain", n, &chain_covers)];
    match n {
        4 => out.push(from_covers("square", 4, &[(0, 1), (0, 2), (1, 3), (2, 3)])),
        5 => {
            out.push(from_covers("M3", 5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]));
            out.push(from_covers("N5", 5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]));
            out.push(from_covers("square+top", 5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]));
            out.push(from_covers("bottom+square", 5, &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)]));
        }
        _ => {}
    }
    out
}
