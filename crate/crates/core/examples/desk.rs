use std::time::Instant;
use opforge_core::neural::{AdamConfig, ModelConfig};
use opforge_core::pipeline::*;
use opforge_core::properties::PropertyTables;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    env_logger::init();
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    let (h, l, e, lr, batch, epochs, n) = (args[0] as usize, args[1] as usize, args[2] as usize, args[3], args[4] as usize, args[5] as usize, args[6] as usize);
    let t = PropertyTables::builtin();
    let c = load_corpus("crates/core/tests/data/desk_corpus.smi".as_ref(), CorpusFormat::Smi, t).unwrap();
    let screened = screen_corpus(c.records, 0.65);
    let smiles: Vec<&str> = screened.iter().map(|r| r.smiles.as_str()).take(n).collect();
    let toks: usize = smiles.iter().map(|s| opforge_core::smiles::tokenize(s).unwrap().len() + 1).sum();
    println!("screened {} windows {}", screened.len(), toks);
    let vocab = corpus_vocabulary(&smiles, &[DEFAULT_SEED]).unwrap();
    let config = ModelConfig { vocab_size: vocab.len(), embed_dim: e, attention_dim: e, hidden_dim: h, window_len: l, rng_seed: 1 };
    let tc = TrainConfig { epochs, batch_size: batch, holdout_fraction: 0.05, adam: AdamConfig { lr, ..AdamConfig::default() } };
    let start = Instant::now();
    let (params, log) = train::<f64, _>(&smiles, &vocab, &config, &tc, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    for e in &log.epochs { println!("{e:?}"); }
    println!("train {:?}", start.elapsed());
    let model = Model { params, config, vocab };
    let seed = Seed::new(DEFAULT_SEED).unwrap();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (recs, s) = generate_batch(&seed, &model, 500, &GrowConfig::default(), 1, t, &mut rng).unwrap();
    println!("gen {:?} {s:?}", start.elapsed());
    for r in recs.iter().take(5) { println!("{} {}", r.valid, r.smiles); }
    let mut ok = 0;
    for i in 0..500 {
        let (s, _) = sample_unseeded(&model, &GrowConfig::default(), &mut rng).unwrap();
        let v = opforge_core::smiles::parse(&s).map(|g| opforge_core::smiles::validate(&g).valid()).unwrap_or(false);
        ok += v as usize;
        if i < 8 { println!("{v} {s}"); }
    }
    println!("unseeded validity {}", ok as f64 / 500.0);
}
