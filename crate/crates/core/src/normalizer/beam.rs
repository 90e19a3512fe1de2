use std::collections::HashMap;

use super::channel::ChannelModel;
use super::lm::{CharLM, LmState, EOS};
use crate::grapheme::Grapheme;

#[derive(Debug, Clone)]
struct Hyp {
    out: String,
    state: LmState,
    score: f64,
}

// higher score first, then lexicographically smaller output
fn better(a: &Hyp, b: &Hyp) -> std::cmp::Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.out.cmp(&b.out))
}

fn insert(slot: &mut HashMap<LmState, Hyp>, hyp: Hyp) {
    match slot.get(&hyp.state) {
        Some(old) if better(old, &hyp).is_le() => {}
        _ => {
            slot.insert(hyp.state, hyp);
        }
    }
}

/// Left-to-right beam search over noisy grapheme positions, scoring each
/// hypothesis by LM log-probability plus log channel weight. Whitespace is
/// copied; graphemes the channel does not know pass through.
pub fn beam_normalize(noisy: &str, channel: &ChannelModel, lm: &CharLM, beam_width: usize) -> String {
    let segmenter = channel.segmenter();
    beam_normalize_with(noisy, channel, &segmenter, lm, beam_width)
}

pub(crate) fn beam_normalize_with(
    noisy: &str,
    channel: &ChannelModel,
    segmenter: &crate::grapheme::Segmenter,
    lm: &CharLM,
    beam_width: usize,
) -> String {
    let width = beam_width.max(1);
    let graphemes = segmenter.segment(noisy);
    let n = graphemes.len();
    let max_len = channel.max_key_len();
    let self_lw = channel.self_weight().ln();

    let mut beams: Vec<HashMap<LmState, Hyp>> = vec![HashMap::new(); n + 1];
    beams[0].insert(
        lm.start(),
        Hyp {
            out: String::new(),
            state: lm.start(),
            score: 0.0,
        },
    );
    for pos in 0..n {
        let mut current: Vec<Hyp> = std::mem::take(&mut beams[pos]).into_values().collect();
        current.sort_by(better);
        current.truncate(width);

        let g = &graphemes[pos];
        let mut moves: Vec<(usize, &[Grapheme], f64)> = Vec::new();
        if g.is_whitespace() {
            moves.push((1, std::slice::from_ref(g), 0.0));
        } else {
            let mut has_self = false;
            for len in 1..=max_len.min(n - pos) {
                let key = &graphemes[pos..pos + len];
                if key.iter().any(Grapheme::is_whitespace) {
                    break;
                }
                if let Some(cands) = channel.candidates(key) {
                    for (clean, w) in cands {
                        has_self |= len == 1 && clean.as_slice() == key;
                        moves.push((len, clean.as_slice(), w.ln()));
                    }
                }
            }
            if !has_self {
                moves.push((1, std::slice::from_ref(g), self_lw));
            }
        }

        for hyp in &current {
            for &(len, clean, lw) in &moves {
                let mut state = hyp.state;
                let mut lp = 0.0;
                let mut out = hyp.out.clone();
                for cg in clean {
                    let (s, p) = lm.score_str(state, cg.as_str());
                    state = s;
                    lp += p;
                    out.push_str(cg.as_str());
                }
                insert(
                    &mut beams[pos + len],
                    Hyp {
                        out,
                        state,
                        score: hyp.score + lp + lw,
                    },
                );
            }
        }
    }

    let mut finals: Vec<Hyp> = std::mem::take(&mut beams[n])
        .into_values()
        .map(|mut h| {
            h.score += lm.log_prob(h.state, EOS);
            h
        })
        .collect();
    finals.sort_by(better);
    finals.into_iter().next().map(|h| h.out).unwrap_or_default()
}
