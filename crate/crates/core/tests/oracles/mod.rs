//! Independent reference computations used by the property tests. Nothing
//! here goes through the grouped-count code paths of the library.

#![allow(dead_code)]

/// (concordant + tied / 2) / (n1 * n0) over all case/control pairs.
pub fn brute_force_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let mut twice = 0u64;
    let (mut n1, mut n0) = (0u64, 0u64);
    for (i, &li) in labels.iter().enumerate() {
        if li {
            n1 += 1;
        } else {
            n0 += 1;
        }
        if !li {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj {
                continue;
            }
            twice += match scores[i].partial_cmp(&scores[j]).unwrap() {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
        }
    }
    twice as f64 / (2 * n1 * n0) as f64
}

/// Mean precision at the rank of each case, for distinct scores.
pub fn brute_force_ap_no_ties(scores: &[f64], labels: &[bool]) -> f64 {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap());
    let (mut hits, mut total) = (0usize, 0.0);
    for (rank, &i) in order.iter().enumerate() {
        if labels[i] {
            hits += 1;
            total += hits as f64 / (rank + 1) as f64;
        }
    }
    total / hits as f64
}

/// Grouped AP by direct evaluation: for every case, the precision among
/// all subjects scoring at least as high.
pub fn direct_grouped_ap(scores: &[f64], labels: &[bool]) -> f64 {
    let n1 = labels.iter().filter(|&&l| l).count();
    let mut total = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        if !li {
            continue;
        }
        let declared = scores.iter().filter(|&&s| s >= scores[i]).count();
        let hits = scores
            .iter()
            .zip(labels)
            .filter(|(&s, &l)| l && s >= scores[i])
            .count();
        total += hits as f64 / declared as f64;
    }
    total / n1 as f64
}

/// Adaptive Simpson quadrature.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// Two-segment hit curve written out independently of the library.
pub fn hit(alpha: f64, beta: f64, pi: f64, t: f64) -> f64 {
    if t <= alpha {
        beta * t
    } else {
        alpha * beta + (t - alpha) * (pi - alpha * beta) / (1.0 - alpha)
    }
}

/// AUC from the area under the hit curve.
pub fn quadrature_auc(alpha: f64, beta: f64, pi: f64) -> f64 {
    let f = |t| hit(alpha, beta, pi, t);
    let area = integrate(&f, 0.0, alpha, 1e-14) + integrate(&f, alpha, 1.0, 1e-14);
    (area - pi * pi / 2.0) / (pi * (1.0 - pi))
}

/// AP = (1 / pi) * integral of (h(t) / t) h'(t) dt, split at the kink.
pub fn quadrature_ap(alpha: f64, beta: f64, pi: f64) -> f64 {
    let first = beta * beta * alpha;
    if alpha >= 1.0 {
        return first / pi;
    }
    let slope = (pi - alpha * beta) / (1.0 - alpha);
    let f = |t: f64| hit(alpha, beta, pi, t) / t * slope;
    let second = if alpha == 0.0 {
        slope * slope
    } else {
        integrate(&f, alpha, 1.0, 1e-14)
    };
    (first + second) / pi
}

/// Central finite difference.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
