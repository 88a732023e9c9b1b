use datawords::words::{bell, enumerate_data_words, enumerate_data_words_of_len};
use datawords::{make_data_word, Alphabet, DataWord};
use proptest::prelude::*;

/// Counts set partitions by brute force over all position→block maps.
fn partitions_by_maps(n: usize) -> usize {
    let mut seen = std::collections::BTreeSet::new();
    let total = n.pow(n as u32);
    for code in 0..total.max(1) {
        let mut c = code;
        let map: Vec<usize> = (0..n).map(|_| {
            let d = c % n.max(1);
            c /= n.max(1);
            d
        }).collect();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &b) in map.iter().enumerate() {
            blocks[b].push(i);
        }
        let mut blocks: Vec<Vec<usize>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        blocks.sort();
        seen.insert(blocks);
    }
    seen.len()
}

#[test]
fn enumeration_counts_match_an_independent_partition_count() {
    let ab = Alphabet::from_chars("ab");
    for len in 1..=5 {
        let count = enumerate_data_words_of_len(&ab, len).count();
        let expected = 2usize.pow(len as u32) * partitions_by_maps(len);
        assert_eq!(count, expected, "length {len}");
        assert_eq!(bell(len) as usize, partitions_by_maps(len));
    }
    assert_eq!(enumerate_data_words(&ab, 4).count(), 290);
}

fn word_strategy() -> impl Strategy<Value = DataWord> {
    (1usize..7).prop_flat_map(|n| {
        (proptest::collection::vec(0usize..2, n), proptest::collection::vec(0usize..n, n)).prop_map(
            move |(letters, owner)| {
                let ab = Alphabet::from_chars("ab");
                let names: Vec<&str> = letters.iter().map(|&l| if l == 0 { "a" } else { "b" }).collect();
                let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
                for (i, &b) in owner.iter().enumerate() {
                    blocks[b].push(i);
                }
                // scrambled block order and empty blocks removed
                let blocks: Vec<Vec<usize>> = blocks.into_iter().rev().filter(|b| !b.is_empty()).collect();
                make_data_word(&ab, &names, &blocks).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn canonicalisation_is_idempotent(w in word_strategy()) {
        let again = make_data_word(w.alphabet(), &w.string(), w.blocks()).unwrap();
        prop_assert_eq!(&again, &w);
        let parsed = DataWord::parse(w.alphabet(), &w.to_string()).unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn same_class_is_an_equivalence(w in word_strategy()) {
        let n = w.len();
        for i in 0..n {
            prop_assert!(w.same_class(i, i).unwrap());
            for j in 0..n {
                prop_assert_eq!(w.same_class(i, j).unwrap(), w.same_class(j, i).unwrap());
                for k in 0..n {
                    if w.same_class(i, j).unwrap() && w.same_class(j, k).unwrap() {
                        prop_assert!(w.same_class(i, k).unwrap());
                    }
                }
            }
        }
        prop_assert!(w.same_class(0, n).is_err());
    }
}
