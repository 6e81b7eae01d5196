//! Small directed-graph helpers shared by the envy-graph procedures.

/// Finds a directed cycle in the graph on `0..n` whose successor lists are
/// produced by `successors`. Roots are tried in ascending order and the
/// successors are visited in the order they are yielded, so the result is
/// deterministic. Returns the cycle's vertices in edge order.
pub(crate) fn find_cycle<F, I>(n: usize, mut successors: F) -> Option<Vec<usize>>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unseen,
        OnStack,
        Done,
    }

    let mut mark = vec![Mark::Unseen; n];
    for root in 0..n {
        if mark[root] != Mark::Unseen {
            continue;
        }
        // Iterative DFS; each frame holds the vertex and its pending successors.
        let mut path: Vec<usize> = vec![root];
        let mut pending: Vec<std::vec::IntoIter<usize>> =
            vec![successors(root).into_iter().collect::<Vec<_>>().into_iter()];
        mark[root] = Mark::OnStack;
        while let Some(iter) = pending.last_mut() {
            match iter.next() {
                Some(next) => match mark[next] {
                    Mark::OnStack => {
                        let start = path.iter().position(|&v| v == next).expect("on stack");
                        return Some(path[start..].to_vec());
                    }
                    Mark::Unseen => {
                        mark[next] = Mark::OnStack;
                        path.push(next);
                        pending.push(successors(next).into_iter().collect::<Vec<_>>().into_iter());
                    }
                    Mark::Done => {}
                },
                None => {
                    let v = path.pop().expect("non-empty path");
                    mark[v] = Mark::Done;
                    pending.pop();
                }
            }
        }
    }
    None
}

pub(crate) fn has_cycle<F, I>(n: usize, successors: F) -> bool
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    find_cycle(n, successors).is_some()
}
