//! Definition-level re-evaluation of single claim instances.
//!
//! Works on plain member lists with quadratic and cubic scans and an
//! exhaustive reachability search for sequence existence. Nothing here calls
//! the basis, predicate or sequence code of this crate, so an agreement
//! between the two is evidence rather than an echo.

use std::collections::HashSet;

use super::{Binding, ClaimId, Verdict};
use crate::mask::SetMask;
use crate::sequences::Strategy;

fn universe(n: usize) -> Vec<SetMask> {
    (1..(1u32 << n))
        .map(|b| SetMask::from_bits(b as u16))
        .collect()
}

fn closed(f: &[SetMask]) -> bool {
    f.iter()
        .all(|&x| f.iter().all(|&y| f.contains(&x.union(y))))
}

fn minus(a: &[SetMask], b: &[SetMask]) -> Vec<SetMask> {
    a.iter().copied().filter(|x| !b.contains(x)).collect()
}

fn plus(a: &[SetMask], b: &[SetMask]) -> Vec<SetMask> {
    let mut out = a.to_vec();
    out.extend(b.iter().copied().filter(|x| !a.contains(x)));
    out
}

fn freq(f: &[SetMask], i: usize) -> usize {
    f.iter().filter(|x| x.contains(i)).count()
}

fn with_element(f: &[SetMask], i: usize) -> Vec<SetMask> {
    f.iter().copied().filter(|x| x.contains(i)).collect()
}

/// Members that are not the union of two other members.
fn naive_basis(f: &[SetMask]) -> Vec<SetMask> {
    f.iter()
        .copied()
        .filter(|&x| {
            !f.iter()
                .any(|&y| y != x && f.iter().any(|&z| z != x && y.union(z) == x))
        })
        .collect()
}

fn is_minimal(d: &[SetMask], n: usize, i: usize) -> bool {
    (1..=n).all(|k| freq(d, i) <= freq(d, k))
}

/// Whether some deletion order of `D` from `A` to `target` keeps every
/// state union-closed. With `phase = Some(i)` the order must delete every
/// set avoiding `i` before any set containing `i`.
fn reachable(n: usize, target: &[SetMask], phase: Option<usize>) -> bool {
    let all = universe(n);
    let pool = minus(&all, target);
    let full: u64 = if pool.len() == 64 {
        u64::MAX
    } else {
        (1u64 << pool.len()) - 1
    };
    let mut seen = HashSet::new();
    let mut stack = vec![0u64];
    while let Some(state) = stack.pop() {
        if state == full {
            return true;
        }
        let left: Vec<usize> = (0..pool.len()).filter(|k| state & (1 << k) == 0).collect();
        let moves: Vec<usize> = match phase {
            Some(i) if left.iter().any(|&k| !pool[k].contains(i)) => {
                left.into_iter().filter(|&k| !pool[k].contains(i)).collect()
            }
            _ => left,
        };
        for k in moves {
            let next = state | (1 << k);
            if seen.contains(&next) {
                continue;
            }
            seen.insert(next);
            let removed: Vec<SetMask> = (0..pool.len())
                .filter(|j| next & (1 << j) != 0)
                .map(|j| pool[j])
                .collect();
            if closed(&minus(&all, &removed)) {
                stack.push(next);
            }
        }
    }
    false
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

fn element_in(n: usize, b: &Binding) -> Option<usize> {
    b.element.filter(|&i| (1..=n).contains(&i))
}

fn t4_bound(
    n: usize,
    f: &[SetMask],
    d: &[SetMask],
    i: usize,
    y1: SetMask,
    y2: SetMask,
) -> Option<bool> {
    let dy = plus(d, &[y1, y2]);
    let clauses = y2.contains(i) && !y1.contains(i) && is_minimal(&dy, n, i);
    if !clauses {
        return None;
    }
    let a = minus(f, &[y1]);
    let quasi = reachable(n, f, Some(i)) && closed(&a) && closed(&minus(&a, &[y2]));
    quasi.then(|| 2 * freq(&dy, i) <= dy.len() + 1)
}

/// Verdict for one instance, or `None` when `params` is not a binding of
/// `claim` on this family.
pub fn recheck(claim: ClaimId, n: usize, members: &[SetMask], params: &Binding) -> Option<Verdict> {
    let f = members;
    let all = universe(n);
    let d = minus(&all, f);
    let is_closed = closed(f);
    if !claim.accepts_arbitrary() && !is_closed {
        return (*params == Binding::default()).then_some(Verdict::PreconditionNotMet);
    }
    let v = match claim {
        ClaimId::L1 => {
            let x = params.set.filter(|x| f.contains(x))?;
            let covered = naive_basis(f)
                .into_iter()
                .filter(|b| b.is_subset(x))
                .fold(SetMask::EMPTY, SetMask::union);
            verdict(covered == x)
        }
        ClaimId::L2 => {
            let b = params.set.filter(|b| naive_basis(f).contains(b))?;
            verdict(closed(&minus(f, &[b])))
        }
        ClaimId::L3 => {
            let basis = naive_basis(f);
            let z = params.set.filter(|z| f.contains(z) && !basis.contains(z))?;
            let after = naive_basis(&minus(f, &[z]));
            verdict(basis.iter().all(|b| after.contains(b)))
        }
        ClaimId::L4 => {
            let j = element_in(n, params)?;
            verdict(closed(&plus(f, &with_element(&d, j))))
        }
        ClaimId::L5 => {
            let i = element_in(n, params)?;
            if freq(&d, i) == 0 {
                Verdict::PreconditionNotMet
            } else {
                verdict(reachable(n, f, Some(i)))
            }
        }
        ClaimId::L6 => {
            let i = element_in(n, params)?;
            let di = with_element(&d, i);
            if di.is_empty() || di.len() == d.len() {
                Verdict::PreconditionNotMet
            } else {
                let avoid = minus(&d, &di);
                let exists = avoid.iter().any(|&y| {
                    di.iter().any(|&r| {
                        closed(&plus(f, &[r]))
                            && closed(&plus(f, &[y, r]))
                            && reachable(n, &plus(f, &[y, r]), Some(i))
                    })
                });
                verdict(exists)
            }
        }
        ClaimId::T1 => {
            if *params != Binding::default() {
                return None;
            }
            if f.is_empty() {
                Verdict::PreconditionNotMet
            } else {
                let half = (1..=n).any(|i| 2 * freq(f, i) >= f.len());
                let identity = f.len() + d.len() == all.len()
                    && (1..=n).all(|i| freq(f, i) + freq(&d, i) == 1 << (n - 1));
                verdict(half && identity)
            }
        }
        ClaimId::T2 => match params.strategy? {
            Strategy::Greedy => {
                let mut current = all.clone();
                let mut ok = true;
                while current.len() > f.len() {
                    let next = naive_basis(&current)
                        .into_iter()
                        .filter(|b| !f.contains(b))
                        .min();
                    match next {
                        Some(b) => current = minus(&current, &[b]),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                    if !closed(&current) {
                        ok = false;
                        break;
                    }
                }
                verdict(ok)
            }
            Strategy::BySize => {
                let mut order = d.clone();
                order.sort_by_key(|x| (x.len(), x.bits()));
                let ok = (1..=order.len()).all(|k| closed(&minus(&all, &order[..k])));
                verdict(ok)
            }
        },
        ClaimId::T3 => {
            let i = element_in(n, params)?;
            let di = with_element(&d, i);
            let avoid = minus(&d, &di);
            if avoid.is_empty() || avoid.iter().any(|&x| closed(&plus(f, &[x]))) {
                Verdict::PreconditionNotMet
            } else {
                let exists = avoid.iter().any(|&y| {
                    di.iter()
                        .any(|&r| closed(&plus(f, &[r])) && closed(&plus(f, &[y, r])))
                });
                verdict(exists)
            }
        }
        ClaimId::T4a => {
            if *params != Binding::default() && params.element.is_none() {
                return None;
            }
            let mut any_good = false;
            let mut any_vacuous = false;
            for i in 1..=n {
                let mut seen = false;
                let mut all_ok = true;
                for &y1 in f {
                    for &y2 in f {
                        if y1 == y2 {
                            continue;
                        }
                        if let Some(ok) = t4_bound(n, f, &d, i, y1, y2) {
                            seen = true;
                            all_ok &= ok;
                        }
                    }
                }
                any_good |= seen && all_ok;
                any_vacuous |= !seen;
            }
            if any_good {
                Verdict::Holds
            } else if any_vacuous {
                Verdict::PreconditionNotMet
            } else {
                Verdict::Fails
            }
        }
        ClaimId::T4b => {
            let i = element_in(n, params)?;
            let (y1, y2) = (params.y1?, params.y2?);
            if y1 == y2 || !f.contains(&y1) || !f.contains(&y2) {
                return None;
            }
            let dy = plus(&d, &[y1, y2]);
            if !(y2.contains(i) && !y1.contains(i) && is_minimal(&dy, n, i)) {
                return None;
            }
            match t4_bound(n, f, &d, i, y1, y2) {
                None => Verdict::PreconditionNotMet,
                Some(ok) => verdict(ok),
            }
        }
        ClaimId::T5 => {
            if d.len() <= 1 {
                return (*params == Binding::default()).then_some(Verdict::PreconditionNotMet);
            }
            let j = element_in(n, params).filter(|&j| is_minimal(&d, n, j))?;
            verdict(2 * freq(&d, j) <= d.len() + 1)
        }
    };
    Some(v)
}
