use crate::smiles::{tokenize, SmilesError, Vocabulary, PAD_ID};

/// The L ids preceding one target position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingWindow {
    pub input: Vec<usize>,
    pub target: usize,
}

/// Stride-1 windows over `ids` (BOS first, EOS last): one window per
/// position after the first, holding the `len` ids before it, left-padded
/// with PAD where the sequence is shorter.
pub fn make_windows(ids: &[usize], len: usize) -> Vec<TrainingWindow> {
    assert!(len >= 2, "window length must be at least 2");
    (1..ids.len())
        .map(|t| {
            let start = t.saturating_sub(len);
            let mut input = vec![PAD_ID; len - (t - start)];
            input.extend_from_slice(&ids[start..t]);
            TrainingWindow {
                input,
                target: ids[t],
            }
        })
        .collect()
}

/// Token ids of a molecule with BOS and EOS added.
pub fn encode_smiles(smiles: &str, vocab: &Vocabulary) -> Result<Vec<usize>, SmilesError> {
    vocab.encode_sequence(&tokenize(smiles)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::{BOS_ID, EOS_ID};

    #[test]
    fn sliding_and_padded() {
        let (b, a, bb, c, e, p) = (BOS_ID, 10, 11, 12, EOS_ID, PAD_ID);
        let w = make_windows(&[b, a, bb, c, e], 3);
        let pairs: Vec<(Vec<usize>, usize)> = w.into_iter().map(|w| (w.input, w.target)).collect();
        assert_eq!(
            pairs,
            vec![
                (vec![p, p, b], a),
                (vec![p, b, a], bb),
                (vec![b, a, bb], c),
                (vec![a, bb, c], e),
            ]
        );
    }

    #[test]
    fn single_atom_molecule() {
        let vocab = Vocabulary::from_texts(&["<pad>", "<bos>", "<eos>", "C"]).unwrap();
        let ids = encode_smiles("C", &vocab).unwrap();
        let w = make_windows(&ids, 4);
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].target, 3);
        assert_eq!(w[1].target, EOS_ID);
    }
}
