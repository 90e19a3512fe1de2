//! Slow, direct re-implementations of the corpus metrics, used as oracles.

fn count<T: PartialEq>(items: &[Vec<T>], needle: &[T]) -> u64 {
    items.iter().filter(|g| g.as_slice() == needle).count() as u64
}

fn ngrams<T: Clone>(seq: &[T], n: usize) -> Vec<Vec<T>> {
    if seq.len() < n {
        return Vec::new();
    }
    (0..=seq.len() - n).map(|i| seq[i..i + n].to_vec()).collect()
}

// clipped matches by scanning: each distinct hypothesis n-gram once
fn clipped<T: Clone + PartialEq>(hyp: &[Vec<T>], reference: &[Vec<T>]) -> u64 {
    let mut done: Vec<&Vec<T>> = Vec::new();
    let mut m = 0;
    for g in hyp {
        if done.contains(&g) {
            continue;
        }
        done.push(g);
        m += count(hyp, g).min(count(reference, g));
    }
    m
}

pub fn bleu(hyps: &[String], refs: &[String]) -> f64 {
    let mut correct = [0u64; 4];
    let mut total = [0u64; 4];
    let (mut c, mut r) = (0u64, 0u64);
    for (h, rf) in hyps.iter().zip(refs) {
        let ht: Vec<&str> = h.split_whitespace().collect();
        let rt: Vec<&str> = rf.split_whitespace().collect();
        c += ht.len() as u64;
        r += rt.len() as u64;
        for n in 1..=4 {
            let hg = ngrams(&ht, n);
            correct[n - 1] += clipped(&hg, &ngrams(&rt, n));
            total[n - 1] += hg.len() as u64;
        }
    }
    if c == 0 || correct.iter().sum::<u64>() == 0 || total.contains(&0) {
        return 0.0;
    }
    let mut k = 1.0;
    let mut logs = 0.0;
    for n in 0..4 {
        let p = if correct[n] == 0 {
            k *= 2.0;
            1.0 / (k * total[n] as f64)
        } else {
            correct[n] as f64 / total[n] as f64
        };
        logs += p.ln() / 4.0;
    }
    let bp = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    100.0 * bp * logs.exp()
}

pub fn chrf(hyps: &[String], refs: &[String]) -> f64 {
    let mut stats = [[0u64; 3]; 6];
    for (h, rf) in hyps.iter().zip(refs) {
        let hc: Vec<char> = h.chars().filter(|c| !c.is_whitespace()).collect();
        let rc: Vec<char> = rf.chars().filter(|c| !c.is_whitespace()).collect();
        for n in 1..=6 {
            let hg = ngrams(&hc, n);
            let rg = ngrams(&rc, n);
            stats[n - 1][0] += hg.len() as u64;
            stats[n - 1][1] += rg.len() as u64;
            stats[n - 1][2] += clipped(&hg, &rg);
        }
    }
    let eps = 1e-16;
    let mut f_sum = 0.0;
    let mut orders = 0;
    for [nh, nr, m] in stats {
        let p = if nh > 0 { m as f64 / nh as f64 } else { eps };
        let r = if nr > 0 { m as f64 / nr as f64 } else { eps };
        let d = 4.0 * p + r;
        f_sum += if d > 0.0 { 5.0 * p * r / d } else { eps };
        if nh > 0 && nr > 0 {
            orders += 1;
        }
    }
    if orders == 0 {
        0.0
    } else {
        100.0 * f_sum / orders as f64
    }
}
