use super::Graph;
use serde::Serialize;
use std::collections::VecDeque;

/// Binary decomposition along complete separators. Vertex indices refer to
/// the original graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PastingTree {
    /// A complete full subgraph.
    Leaf(Vec<usize>),
    /// Gamma = left U right with left ∩ right = separator (complete, possibly empty).
    Paste {
        left: Box<PastingTree>,
        right: Box<PastingTree>,
        separator: Vec<usize>,
    },
}

impl PastingTree {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            PastingTree::Leaf(v) => v.clone(),
            PastingTree::Paste { left, right, .. } => {
                let mut v = left.vertices();
                v.extend(right.vertices());
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    pub fn leaves(&self) -> Vec<Vec<usize>> {
        match self {
            PastingTree::Leaf(v) => vec![v.clone()],
            PastingTree::Paste { left, right, .. } => {
                let mut l = left.leaves();
                l.extend(right.leaves());
                l
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChordalStructure {
    /// Perfect elimination ordering: each vertex's later neighbours form a clique.
    pub elimination_order: Vec<usize>,
    pub tree: PastingTree,
}

/// A chordless cycle of length at least 4, in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotChordal {
    pub cycle: Vec<usize>,
}

fn lex_bfs(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut label: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .max_by(|&a, &b| label[a].cmp(&label[b]).then(b.cmp(&a)))
            .unwrap();
        done[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !done[u] {
                label[u].push(n - step);
            }
        }
    }
    order
}

fn is_perfect_elimination(g: &Graph, peo: &[usize]) -> bool {
    let mut pos = vec![0; g.n()];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    peo.iter().all(|&v| {
        let later: Vec<usize> = g.neighbors(v).into_iter().filter(|&u| pos[u] > pos[v]).collect();
        match later.iter().min_by_key(|&&u| pos[u]) {
            None => true,
            Some(&first) => later.iter().all(|&u| u == first || g.adjacent(first, u)),
        }
    })
}

fn chordless_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    for v in 0..n {
        let nb = g.neighbors(v);
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if g.adjacent(a, b) {
                    continue;
                }
                // shortest a-b path avoiding v and its other neighbours
                let blocked = |u: usize| u == v || (g.adjacent(v, u) && u != a && u != b);
                let mut prev = vec![usize::MAX; n];
                prev[a] = a;
                let mut queue = VecDeque::from([a]);
                while let Some(x) = queue.pop_front() {
                    if x == b {
                        break;
                    }
                    for y in g.neighbors(x) {
                        if prev[y] == usize::MAX && !blocked(y) {
                            prev[y] = x;
                            queue.push_back(y);
                        }
                    }
                }
                if prev[b] != usize::MAX {
                    let mut cycle = vec![v];
                    let mut path = vec![b];
                    let mut x = b;
                    while x != a {
                        x = prev[x];
                        path.push(x);
                    }
                    path.reverse();
                    cycle.extend(path);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

fn build_tree(g: &Graph, peo: &[usize], set: &[usize]) -> PastingTree {
    let inside = |u: usize| set.contains(&u);
    let is_clique = set
        .iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| g.adjacent(a, b)));
    if is_clique {
        return PastingTree::Leaf(set.to_vec());
    }
    // the first vertex of the ordering inside `set` is simplicial in G[set]
    let v = *peo.iter().find(|&&u| inside(u)).unwrap();
    let sep: Vec<usize> = g.neighbors(v).into_iter().filter(|&u| inside(u)).collect();
    let mut closed = sep.clone();
    closed.push(v);
    closed.sort_unstable();
    let rest: Vec<usize> = set.iter().copied().filter(|&u| u != v).collect();
    PastingTree::Paste {
        left: Box::new(PastingTree::Leaf(closed)),
        right: Box::new(build_tree(g, peo, &rest)),
        separator: sep,
    }
}

/// Perfect elimination ordering and pasting tree, or a chordless cycle.
pub fn chordal_structure(g: &Graph) -> Result<ChordalStructure, NotChordal> {
    let mut peo = lex_bfs(g);
    peo.reverse();
    if !is_perfect_elimination(g, &peo) {
        let cycle = chordless_cycle(g).expect("non-chordal graph has a chordless cycle");
        return Err(NotChordal { cycle });
    }
    let all: Vec<usize> = (0..g.n()).collect();
    Ok(ChordalStructure {
        tree: build_tree(g, &peo, &all),
        elimination_order: peo,
    })
}
