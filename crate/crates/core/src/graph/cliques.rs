use super::Graph;

/// c_n = number of n-element cliques, c_0 = 1; trailing zeros dropped.
pub fn clique_polynomial(g: &Graph) -> Vec<u64> {
    let mut counts = vec![1u64];
    fn grow(g: &Graph, size: usize, candidates: u64, counts: &mut Vec<u64>) {
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if counts.len() <= size + 1 {
                counts.push(0);
            }
            counts[size + 1] += 1;
            // only later vertices, so each clique is counted once
            grow(g, size + 1, rest & g.neighbors_mask(v), counts);
        }
    }
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    grow(g, 0, all, &mut counts);
    counts
}

pub fn is_triangle_free(g: &Graph) -> bool {
    clique_polynomial(g).len() <= 3
}

/// Maximal cliques (Bron-Kerbosch with pivoting), each sorted, in discovery order.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    fn bk(g: &Graph, r: u64, mut p: u64, mut x: u64, out: &mut Vec<Vec<usize>>) {
        if p == 0 && x == 0 {
            out.push(bits(r));
            return;
        }
        let pivot = bits(p | x)
            .into_iter()
            .max_by_key(|&u| (p & g.neighbors_mask(u)).count_ones())
            .expect("p or x nonempty");
        let mut cand = p & !g.neighbors_mask(pivot);
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let nv = g.neighbors_mask(v);
            bk(g, r | 1 << v, p & nv, x & nv, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut out = Vec::new();
    if g.n() == 0 {
        return vec![Vec::new()];
    }
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    bk(g, 0, all, 0, &mut out);
    out
}

fn bits(mut m: u64) -> Vec<usize> {
    let mut v = Vec::new();
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}
