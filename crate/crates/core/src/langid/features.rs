/// Number of hash buckets for n-gram and word features.
pub const BUCKETS: u32 = 1 << 21;
pub const MIN_N: usize = 2;
pub const MAX_N: usize = 4;

fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u32 {
    let mut h: u32 = 0x811C_9DC5;
    for b in bytes {
        h ^= u32::from(b);
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

/// Hashed features of a sentence: one per word plus the character 2-4 grams
/// of each word wrapped in `<`/`>`.
pub fn features(sentence: &str) -> Vec<u32> {
    let mut out = Vec::new();
    for word in sentence.split_whitespace() {
        // marker byte keeps whole words apart from n-grams with the same text
        out.push(fnv1a(std::iter::once(1u8).chain(word.bytes())) % BUCKETS);
        let chars: Vec<char> = std::iter::once('<').chain(word.chars()).chain(std::iter::once('>')).collect();
        for n in MIN_N..=MAX_N {
            for gram in chars.windows(n) {
                let s: String = gram.iter().collect();
                out.push(fnv1a(s.bytes()) % BUCKETS);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_per_word() {
        // "<ab>" has 3 bigrams, 2 trigrams, 1 four-gram, plus the word
        assert_eq!(features("ab").len(), 7);
        assert_eq!(features("ab ab").len(), 14);
        assert!(features("   ").is_empty());
    }

    #[test]
    fn word_and_gram_differ() {
        // "ab" as a word and as the inner bigram of "<ab>"
        let f = features("ab");
        let bigram = fnv1a(*b"ab") % BUCKETS;
        assert!(f[1..].contains(&bigram));
        assert_ne!(f[0], bigram);
    }

    #[test]
    fn stable_hash() {
        assert_eq!(fnv1a(*b"a"), 0xE40C_292C);
    }
}
