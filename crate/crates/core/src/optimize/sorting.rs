use crate::error::{check_len, Error, Result};
use crate::pareto::{dominates_objectives, Dominance, EvaluatedSolution, Sense};
use crate::scalar::Real;

/// Partitions `pop` into fronts of indices: front 0 is non-dominated, front k
/// is non-dominated once fronts `< k` are removed. Indices within a front are
/// ascending.
pub fn fast_non_dominated_sort<T: Real>(pop: &[EvaluatedSolution<T>], senses: &[Sense]) -> Result<Vec<Vec<usize>>> {
    if pop.is_empty() {
        return Err(Error::EmptyInput("population"));
    }
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            match dominates_objectives(&pop[i].objectives, &pop[j].objectives, senses)? {
                Dominance::ADominates => {
                    dominated_by_me[i].push(j);
                    count[j] += 1;
                }
                Dominance::BDominates => {
                    dominated_by_me[j].push(i);
                    count[i] += 1;
                }
                Dominance::NoDominance => {}
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(fronts)
}

/// Crowding distance of each member of `front`: per objective, the two
/// extremes get `+∞` and interior members add the gap between their sorted
/// neighbors divided by the objective's range.
pub fn crowding_distance<T: Real>(front: &[EvaluatedSolution<T>], senses: &[Sense]) -> Result<Vec<T>> {
    let n = front.len();
    let mut dist = vec![T::zero(); n];
    if n == 0 {
        return Ok(dist);
    }
    for s in front {
        check_len(senses.len(), s.objectives.len())?;
    }
    if n <= 2 {
        return Ok(vec![T::infinity(); n]);
    }
    let mut order: Vec<usize> = (0..n).collect();
    for r in 0..senses.len() {
        let key = |i: usize| front[i].objectives[r];
        order.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
        let lo = key(order[0]);
        let hi = key(order[n - 1]);
        dist[order[0]] = T::infinity();
        dist[order[n - 1]] = T::infinity();
        let range = hi - lo;
        if !(range > T::zero()) || !range.is_finite() {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if dist[i].is_finite() {
                dist[i] = dist[i] + (key(order[w + 1]) - key(order[w - 1])) / range;
            }
        }
    }
    Ok(dist)
}
