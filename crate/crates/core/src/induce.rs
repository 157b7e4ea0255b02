//! End-to-end sense induction: fill `predict_sense_id` for every record
//! of a dataset, one word at a time.
//!
//! Three families of methods are provided. The prototype method derives
//! two sense prototypes per word directly from the embedding space (the
//! word's nearest neighbor, then the nearest neighbor of the word vector
//! minus that neighbor) and assigns contexts by cosine. The clustering
//! methods vectorize every context and run one of the clustering
//! algorithms. The baselines put everything in one cluster, everything
//! in singletons, or assign uniformly at random.
//!
//! Methods never read gold labels. Predictions for a word depend only on
//! that word's records (plus the embedding store), except that the
//! chi-square weighting scheme contrasts a word's contexts against the
//! rest of the dataset by definition. Seeded methods derive a per-word
//! seed, so the random stream of one word is untouched by edits to other
//! words.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::cluster::{
    affinity_propagation, agglomerative, kmeans, ApConfig, ClusterError, Linkage,
    SimilarityMatrix, StopRule,
};
use crate::dataset::{ContextRecord, Dataset};
use crate::embedding::{cosine, EmbeddingError, EmbeddingStore};
use crate::rng::{word_seed, SplitMix64};
use crate::vectorize::{context_vector, VectorizeError, WeightingScheme, WordStats};

#[derive(Debug, Clone, PartialEq)]
pub enum InduceError {
    /// The chosen method needs an embedding store and none was supplied.
    MissingEmbeddings,
    EmptyGroup,
    EmptyInventory,
    /// Target word absent from the embedding vocabulary.
    OutOfVocabulary { word: String },
    /// Prototype induction needs at least three tokens in the store.
    VocabularyTooSmall { have: usize },
    /// Every context of the word vectorized to nothing.
    AllContextsOutOfVocabulary { word: String },
    InvalidK { k: usize },
    Cluster(ClusterError),
    Embedding(EmbeddingError),
    Vectorize(VectorizeError),
    /// A failure while processing one word of a full run.
    Word { word: String, source: Box<InduceError> },
}

impl fmt::Display for InduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingEmbeddings => write!(f, "method requires an embedding store"),
            Self::EmptyGroup => write!(f, "empty record group"),
            Self::EmptyInventory => write!(f, "sense inventory has no prototypes"),
            Self::OutOfVocabulary { word } => {
                write!(f, "word '{word}' is not in the embedding vocabulary")
            }
            Self::VocabularyTooSmall { have } => {
                write!(f, "vocabulary of {have} tokens is too small for prototype induction")
            }
            Self::AllContextsOutOfVocabulary { word } => {
                write!(f, "all contexts of '{word}' are out of vocabulary")
            }
            Self::InvalidK { k } => write!(f, "invalid cluster count {k}"),
            Self::Cluster(e) => write!(f, "clustering failed: {e}"),
            Self::Embedding(e) => write!(f, "embedding query failed: {e}"),
            Self::Vectorize(e) => write!(f, "vectorization failed: {e}"),
            Self::Word { word, source } => write!(f, "word '{word}': {source}"),
        }
    }
}

impl core::error::Error for InduceError {}

impl From<ClusterError> for InduceError {
    fn from(e: ClusterError) -> Self {
        Self::Cluster(e)
    }
}

impl From<EmbeddingError> for InduceError {
    fn from(e: EmbeddingError) -> Self {
        Self::Embedding(e)
    }
}

impl From<VectorizeError> for InduceError {
    fn from(e: VectorizeError) -> Self {
        Self::Vectorize(e)
    }
}

/// Labeled sense prototype vectors for one word.
#[derive(Debug, Clone, PartialEq)]
pub struct SenseInventory {
    pub word: String,
    pub prototypes: Vec<(String, Vec<f64>)>,
}

/// Clustering algorithm choice for [`Method::Cluster`].
#[derive(Debug, Clone, PartialEq)]
pub enum ClusterMethod {
    AffinityPropagation(ApConfig),
    Agglomerative { linkage: Linkage, stop: StopRule },
    KMeans { k: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    /// Two prototypes per word by nearest-neighbor vector subtraction.
    NnSubtraction,
    /// Cluster the per-context vectors.
    Cluster(ClusterMethod),
    BaselineOne,
    BaselineSingletons,
    BaselineRandom { k: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodConfig {
    pub method: Method,
    /// Token weighting for clustering methods; prototype assignment
    /// always uses the plain average.
    pub scheme: WeightingScheme,
    pub seed: u64,
}

impl MethodConfig {
    pub fn new(method: Method) -> Self {
        Self { method, scheme: WeightingScheme::Uniform, seed: 0 }
    }

    pub fn needs_embeddings(&self) -> bool {
        matches!(self.method, Method::NnSubtraction | Method::Cluster(_))
    }
}

/// Dataset with predictions filled in, plus per-word warnings (method
/// fallbacks, convergence issues) for the run report.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub dataset: Dataset,
    pub warnings: Vec<String>,
}

/// Derive a two-prototype sense inventory for `word` from the embedding
/// geometry: the nearest neighbor is the first sense; the nearest
/// neighbor of (word vector - first neighbor) is the second.
pub fn nn_subtraction_prototypes(
    word: &str,
    store: &EmbeddingStore,
) -> Result<SenseInventory, InduceError> {
    let word_vec =
        store.get(word).ok_or_else(|| InduceError::OutOfVocabulary { word: word.to_string() })?;
    if store.len() < 3 {
        return Err(InduceError::VocabularyTooSmall { have: store.len() });
    }
    let first = store
        .nearest_neighbors(word_vec, 1, &[word])?
        .into_iter()
        .next()
        .expect("len >= 2 after excluding the word");
    let residual: Vec<f64> = word_vec
        .iter()
        .zip(store.get(&first.token).expect("returned from the store"))
        .map(|(w, n)| w - n)
        .collect();
    let second = store
        .nearest_neighbors(&residual, 1, &[word, &first.token])?
        .into_iter()
        .next()
        .expect("len >= 3 after excluding two tokens");
    let prototypes = alloc::vec![
        ("1".to_string(), store.get(&first.token).expect("present").to_vec()),
        ("2".to_string(), store.get(&second.token).expect("present").to_vec()),
    ];
    Ok(SenseInventory { word: word.to_string(), prototypes })
}

/// Label of the prototype most cosine-similar to `context_vector`.
/// Exact ties and zero context vectors resolve to the first prototype.
pub fn assign_by_prototypes<'a>(
    context_vector: &[f64],
    inventory: &'a SenseInventory,
) -> Result<&'a str, InduceError> {
    let mut best: Option<(&str, f64)> = None;
    for (label, prototype) in &inventory.prototypes {
        let sim = cosine(context_vector, prototype)?;
        match best {
            Some((_, s)) if sim <= s => {}
            _ => best = Some((label, sim)),
        }
    }
    best.map(|(label, _)| label).ok_or(InduceError::EmptyInventory)
}

pub fn baseline_one(n: usize) -> Vec<String> {
    alloc::vec!["1".to_string(); n]
}

pub fn baseline_singletons(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn baseline_random(n: usize, k: usize, seed: u64) -> Result<Vec<String>, InduceError> {
    if k == 0 {
        return Err(InduceError::InvalidK { k });
    }
    let mut rng = SplitMix64::new(seed);
    Ok((0..n).map(|_| (rng.next_below(k) + 1).to_string()).collect())
}

/// Vectorize and cluster one word's records. Returns per-record labels
/// (aligned with `records`) and any warnings. Records whose contexts are
/// entirely out of vocabulary join the largest cluster found among the
/// rest; if every record is out of vocabulary the word cannot be
/// clustered and an error is returned for the caller to fall back on.
pub fn cluster_contexts(
    records: &[&ContextRecord],
    dataset: &Dataset,
    store: &EmbeddingStore,
    scheme: &WeightingScheme,
    method: &ClusterMethod,
    seed: u64,
) -> Result<(Vec<String>, Vec<String>), InduceError> {
    let first = records.first().ok_or(InduceError::EmptyGroup)?;
    let word = first.word.clone();
    let mut warnings = Vec::new();

    let stats = if scheme.needs_stats() {
        Some(WordStats::compute(records, dataset)?)
    } else {
        None
    };
    let mut vectors = Vec::with_capacity(records.len());
    let mut in_vocab = Vec::new();
    for (idx, record) in records.iter().enumerate() {
        let (vector, oov) = context_vector(record, store, stats.as_ref(), scheme, true)?;
        if !oov {
            in_vocab.push(idx);
        }
        vectors.push(vector);
    }
    if in_vocab.is_empty() {
        return Err(InduceError::AllContextsOutOfVocabulary { word });
    }
    let clustered: Vec<Vec<f64>> = in_vocab.iter().map(|&i| vectors[i].clone()).collect();

    let assignment = match method {
        ClusterMethod::AffinityPropagation(config) => {
            let sims = SimilarityMatrix::from_cosines(&clustered)?;
            let out = affinity_propagation(&sims, config)?;
            if !out.converged {
                warnings.push(format!(
                    "{word}: affinity propagation did not converge within {} iterations",
                    config.max_iterations
                ));
            }
            out.assignment
        }
        ClusterMethod::Agglomerative { linkage, stop } => {
            let stop = match *stop {
                StopRule::FixedK(k) => {
                    if k == 0 {
                        return Err(InduceError::InvalidK { k });
                    }
                    let capped = k.min(clustered.len());
                    if capped < k {
                        warnings.push(format!(
                            "{word}: only {} usable contexts, clustering with k = {capped}",
                            clustered.len()
                        ));
                    }
                    StopRule::FixedK(capped)
                }
                threshold => threshold,
            };
            agglomerative(&clustered, *linkage, stop)?
        }
        ClusterMethod::KMeans { k } => {
            if *k == 0 {
                return Err(InduceError::InvalidK { k: *k });
            }
            let capped = (*k).min(clustered.len());
            if capped < *k {
                warnings.push(format!(
                    "{word}: only {} usable contexts, clustering with k = {capped}",
                    clustered.len()
                ));
            }
            kmeans(&clustered, capped, seed)?
        }
    };

    // Out-of-vocabulary records join the largest cluster (the majority
    // sense stand-in); ties go to the lower label.
    let sizes = assignment.sizes();
    let largest = sizes
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .map(|(i, _)| i)
        .unwrap_or(0);

    let mut labels = alloc::vec![String::new(); records.len()];
    for (slot, &record_idx) in in_vocab.iter().enumerate() {
        labels[record_idx] = (assignment.labels[slot] + 1).to_string();
    }
    let mut oov_count = 0usize;
    for label in labels.iter_mut() {
        if label.is_empty() {
            *label = (largest + 1).to_string();
            oov_count += 1;
        }
    }
    if oov_count > 0 {
        warnings.push(format!(
            "{word}: {oov_count} context(s) out of vocabulary, assigned to the largest cluster"
        ));
    }
    Ok((labels, warnings))
}

/// Run `config` over the whole dataset, word by word, and return a copy
/// with every `predict_sense_id` filled. Gold labels are never read.
pub fn run(
    dataset: &Dataset,
    config: &MethodConfig,
    store: Option<&EmbeddingStore>,
) -> Result<RunOutput, InduceError> {
    if config.needs_embeddings() && store.is_none() {
        return Err(InduceError::MissingEmbeddings);
    }
    let mut output = dataset.clone();
    let mut warnings = Vec::new();

    for (word, indices) in dataset.group_by_word() {
        let records: Vec<&ContextRecord> = indices.iter().map(|&i| &dataset.records[i]).collect();
        let seed = word_seed(config.seed, &word);
        let labels = induce_word(&word, &records, dataset, config, store, seed, &mut warnings)
            .map_err(|e| InduceError::Word { word: word.clone(), source: Box::new(e) })?;
        debug_assert_eq!(labels.len(), indices.len());
        for (&record_idx, label) in indices.iter().zip(labels) {
            output.records[record_idx].predict_sense_id = Some(label);
        }
    }
    Ok(RunOutput { dataset: output, warnings })
}

fn induce_word(
    word: &str,
    records: &[&ContextRecord],
    dataset: &Dataset,
    config: &MethodConfig,
    store: Option<&EmbeddingStore>,
    seed: u64,
    warnings: &mut Vec<String>,
) -> Result<Vec<String>, InduceError> {
    let n = records.len();
    match &config.method {
        Method::BaselineOne => Ok(baseline_one(n)),
        Method::BaselineSingletons => Ok(baseline_singletons(n)),
        Method::BaselineRandom { k } => baseline_random(n, *k, seed),
        Method::NnSubtraction => {
            let store = store.ok_or(InduceError::MissingEmbeddings)?;
            let inventory = match nn_subtraction_prototypes(word, store) {
                Ok(inventory) => inventory,
                Err(InduceError::OutOfVocabulary { .. }) => {
                    warnings.push(format!(
                        "{word}: target out of vocabulary, falling back to one cluster"
                    ));
                    return Ok(baseline_one(n));
                }
                Err(other) => return Err(other),
            };
            let mut labels = Vec::with_capacity(n);
            for record in records {
                let (vector, _) =
                    context_vector(record, store, None, &WeightingScheme::Uniform, true)?;
                labels.push(assign_by_prototypes(&vector, &inventory)?.to_string());
            }
            Ok(labels)
        }
        Method::Cluster(method) => {
            let store = store.ok_or(InduceError::MissingEmbeddings)?;
            match cluster_contexts(records, dataset, store, &config.scheme, method, seed) {
                Ok((labels, mut word_warnings)) => {
                    warnings.append(&mut word_warnings);
                    Ok(labels)
                }
                Err(InduceError::AllContextsOutOfVocabulary { .. }) => {
                    warnings.push(format!(
                        "{word}: all contexts out of vocabulary, falling back to one cluster"
                    ));
                    Ok(baseline_one(n))
                }
                Err(other) => Err(other),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn record(id: &str, word: &str, gold: Option<&str>, context: &str) -> ContextRecord {
        ContextRecord {
            context_id: id.to_string(),
            word: word.to_string(),
            gold_sense_id: gold.map(|s| s.to_string()),
            predict_sense_id: None,
            positions: vec![],
            context: context.to_string(),
        }
    }

    /// Ten-token store where v_bank = v_money + v_river plus tiny noise,
    /// with distinct money-side and river-side tokens.
    fn bank_store() -> EmbeddingStore {
        EmbeddingStore::from_entries(
            4,
            [
                ("bank".to_string(), vec![1.01, 0.99, 0.0, 0.005]),
                ("money".to_string(), vec![1.0, 0.0, 0.0, 0.0]),
                ("cash".to_string(), vec![0.98, 0.05, 0.01, 0.0]),
                ("loan".to_string(), vec![0.97, 0.02, 0.0, 0.01]),
                ("river".to_string(), vec![0.0, 1.0, 0.0, 0.0]),
                ("shore".to_string(), vec![0.03, 0.99, 0.0, 0.0]),
                ("water".to_string(), vec![0.01, 0.96, 0.02, 0.0]),
            ],
        )
        .unwrap()
    }

    const MONEY_SIDE: [&str; 3] = ["money", "cash", "loan"];
    const RIVER_SIDE: [&str; 3] = ["river", "shore", "water"];

    #[test]
    fn nn_subtraction_matches_brute_force() {
        let store = bank_store();
        let inventory = nn_subtraction_prototypes("bank", &store).unwrap();
        assert_eq!(inventory.prototypes.len(), 2);
        assert_eq!(inventory.prototypes[0].0, "1");
        assert_eq!(inventory.prototypes[1].0, "2");

        // Brute-force oracle over all store tokens.
        let bank = store.get("bank").unwrap();
        let brute_best = |query: &[f64], exclude: &[&str]| -> String {
            let mut ranked: Vec<(String, f64)> = store
                .iter()
                .filter(|(t, _)| !exclude.contains(t))
                .map(|(t, v)| (t.to_string(), cosine(query, v).unwrap()))
                .collect();
            ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            ranked[0].0.clone()
        };
        let n1 = brute_best(bank, &["bank"]);
        let residual: Vec<f64> =
            bank.iter().zip(store.get(&n1).unwrap()).map(|(a, b)| a - b).collect();
        let n2 = brute_best(&residual, &["bank", n1.as_str()]);
        assert_eq!(inventory.prototypes[0].1, store.get(&n1).unwrap());
        assert_eq!(inventory.prototypes[1].1, store.get(&n2).unwrap());

        // The subtraction flips sides: one prototype per sense.
        let one_money = MONEY_SIDE.contains(&n1.as_str()) && RIVER_SIDE.contains(&n2.as_str());
        let one_river = RIVER_SIDE.contains(&n1.as_str()) && MONEY_SIDE.contains(&n2.as_str());
        assert!(one_money || one_river, "n1 = {n1}, n2 = {n2}");
    }

    #[test]
    fn nn_subtraction_rejects_tiny_vocabulary() {
        let store = EmbeddingStore::from_entries(
            2,
            [("bank".to_string(), vec![1.0, 1.0]), ("x".to_string(), vec![1.0, 0.0])],
        )
        .unwrap();
        assert_eq!(
            nn_subtraction_prototypes("bank", &store).unwrap_err(),
            InduceError::VocabularyTooSmall { have: 2 }
        );
    }

    #[test]
    fn nn_subtraction_rejects_oov_word() {
        let store = bank_store();
        assert!(matches!(
            nn_subtraction_prototypes("unknown", &store),
            Err(InduceError::OutOfVocabulary { .. })
        ));
    }

    fn two_prototype_inventory() -> SenseInventory {
        SenseInventory {
            word: "w".to_string(),
            prototypes: vec![
                ("1".to_string(), vec![1.0, 0.0]),
                ("2".to_string(), vec![0.0, 1.0]),
            ],
        }
    }

    #[test]
    fn assign_exact_prototype_match() {
        let inventory = two_prototype_inventory();
        assert_eq!(assign_by_prototypes(&[1.0, 0.0], &inventory).unwrap(), "1");
    }

    #[test]
    fn assign_tie_and_zero_resolve_to_first() {
        let inventory = two_prototype_inventory();
        assert_eq!(assign_by_prototypes(&[1.0, 1.0], &inventory).unwrap(), "1");
        assert_eq!(assign_by_prototypes(&[0.0, 0.0], &inventory).unwrap(), "1");
    }

    #[test]
    fn assign_nearer_second_prototype() {
        let inventory = two_prototype_inventory();
        assert_eq!(assign_by_prototypes(&[0.2, 0.9], &inventory).unwrap(), "2");
    }

    #[test]
    fn baselines_shapes_and_determinism() {
        assert_eq!(baseline_one(5), vec!["1"; 5]);
        let singles = baseline_singletons(5);
        assert_eq!(singles, vec!["1", "2", "3", "4", "5"]);
        let a = baseline_random(20, 3, 77).unwrap();
        let b = baseline_random(20, 3, 77).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|l| ["1", "2", "3"].contains(&l.as_str())));
        assert!(baseline_random(5, 0, 1).is_err());
    }

    /// Dataset with one word whose contexts split into two clearly
    /// separated sense vocabularies, plus the store covering them.
    fn planted_word() -> (Dataset, EmbeddingStore) {
        let store = EmbeddingStore::from_entries(
            2,
            [
                ("m1".to_string(), vec![1.0, 0.01]),
                ("m2".to_string(), vec![0.99, 0.02]),
                ("m3".to_string(), vec![1.0, 0.0]),
                ("r1".to_string(), vec![0.01, 1.0]),
                ("r2".to_string(), vec![0.0, 0.98]),
                ("r3".to_string(), vec![0.02, 1.0]),
            ],
        )
        .unwrap();
        let dataset = Dataset::new(vec![
            record("1", "bank", Some("money"), "m1 m2 bank"),
            record("2", "bank", Some("money"), "m2 m3 bank"),
            record("3", "bank", Some("money"), "m1 m3 bank"),
            record("4", "bank", Some("river"), "r1 r2 bank"),
            record("5", "bank", Some("river"), "r2 r3 bank"),
            record("6", "bank", Some("river"), "r1 r3 bank"),
        ]);
        (dataset, store)
    }

    #[test]
    fn cluster_contexts_single_record() {
        let (dataset, store) = planted_word();
        let records = [&dataset.records[0]];
        let (labels, warnings) = cluster_contexts(
            &records,
            &dataset,
            &store,
            &WeightingScheme::Uniform,
            &ClusterMethod::AffinityPropagation(ApConfig::default()),
            0,
        )
        .unwrap();
        assert_eq!(labels, vec!["1"]);
        assert!(warnings.is_empty());
    }

    #[test]
    fn cluster_contexts_recovers_planted_partition() {
        let (dataset, store) = planted_word();
        let records: Vec<&ContextRecord> = dataset.records.iter().collect();
        for method in [
            ClusterMethod::AffinityPropagation(ApConfig::default()),
            ClusterMethod::Agglomerative {
                linkage: Linkage::Average,
                stop: StopRule::FixedK(2),
            },
            ClusterMethod::KMeans { k: 2 },
        ] {
            let (labels, _) = cluster_contexts(
                &records,
                &dataset,
                &store,
                &WeightingScheme::Uniform,
                &method,
                42,
            )
            .unwrap();
            assert_eq!(labels, vec!["1", "1", "1", "2", "2", "2"], "{method:?}");
        }
    }

    #[test]
    fn cluster_contexts_assigns_oov_to_largest_cluster() {
        let (mut dataset, store) = planted_word();
        dataset.records.push(record("7", "bank", None, "zzz qqq"));
        dataset.records.push(record("8", "bank", Some("money"), "m1 bank"));
        let records: Vec<&ContextRecord> = dataset.records.iter().collect();
        let (labels, warnings) = cluster_contexts(
            &records,
            &dataset,
            &store,
            &WeightingScheme::Uniform,
            &ClusterMethod::KMeans { k: 2 },
            42,
        )
        .unwrap();
        // Money cluster now has 4 members, river 3; the OOV record joins it.
        assert_eq!(labels[6], labels[0]);
        assert!(warnings.iter().any(|w| w.contains("out of vocabulary")));
    }

    #[test]
    fn cluster_contexts_errors_when_everything_oov() {
        let dataset = Dataset::new(vec![record("1", "bank", None, "zzz")]);
        let store = EmbeddingStore::from_entries(2, [("m1".to_string(), vec![1.0, 0.0])]).unwrap();
        let records: Vec<&ContextRecord> = dataset.records.iter().collect();
        assert!(matches!(
            cluster_contexts(
                &records,
                &dataset,
                &store,
                &WeightingScheme::Uniform,
                &ClusterMethod::KMeans { k: 2 },
                0,
            ),
            Err(InduceError::AllContextsOutOfVocabulary { .. })
        ));
    }

    #[test]
    fn run_baseline_one_per_word() {
        let dataset = Dataset::new(vec![
            record("1", "a", None, "x"),
            record("2", "b", None, "y"),
            record("3", "a", None, "z"),
        ]);
        let out = run(&dataset, &MethodConfig::new(Method::BaselineOne), None).unwrap();
        assert!(out
            .dataset
            .records
            .iter()
            .all(|r| r.predict_sense_id.as_deref() == Some("1")));
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn run_is_gold_blind() {
        let (dataset, store) = planted_word();
        let mut flipped = dataset.clone();
        for r in flipped.records.iter_mut() {
            r.gold_sense_id = r.gold_sense_id.as_ref().map(|g| {
                if g == "money" {
                    "river".to_string()
                } else {
                    "money".to_string()
                }
            });
        }
        let config = MethodConfig {
            method: Method::Cluster(ClusterMethod::KMeans { k: 2 }),
            scheme: WeightingScheme::Uniform,
            seed: 5,
        };
        let a = run(&dataset, &config, Some(&store)).unwrap();
        let b = run(&flipped, &config, Some(&store)).unwrap();
        let predictions =
            |o: &RunOutput| o.dataset.records.iter().map(|r| r.predict_sense_id.clone()).collect::<Vec<_>>();
        assert_eq!(predictions(&a), predictions(&b));
    }

    #[test]
    fn run_per_word_isolation_under_uniform_scheme() {
        let (dataset, store) = planted_word();
        let mut extended = dataset.clone();
        let mut extra = EmbeddingStore::from_entries(
            2,
            store.iter().map(|(t, v)| (t.to_string(), v.to_vec())),
        )
        .unwrap();
        extra.insert("q1".to_string(), vec![0.5, 0.5]).unwrap();
        extended.records.push(record("9", "other", None, "q1"));
        let config = MethodConfig {
            method: Method::Cluster(ClusterMethod::KMeans { k: 2 }),
            scheme: WeightingScheme::Uniform,
            seed: 9,
        };
        let small = run(&dataset, &config, Some(&extra)).unwrap();
        let big = run(&extended, &config, Some(&extra)).unwrap();
        for (a, b) in small.dataset.records.iter().zip(big.dataset.records.iter()) {
            assert_eq!(a.predict_sense_id, b.predict_sense_id);
        }
    }

    #[test]
    fn run_nn_subtraction_fallback_on_oov_target() {
        let store = bank_store();
        let dataset = Dataset::new(vec![
            record("1", "notinstore", None, "money cash"),
            record("2", "notinstore", None, "river shore"),
        ]);
        let out =
            run(&dataset, &MethodConfig::new(Method::NnSubtraction), Some(&store)).unwrap();
        assert!(out
            .dataset
            .records
            .iter()
            .all(|r| r.predict_sense_id.as_deref() == Some("1")));
        assert_eq!(out.warnings.len(), 1);
        assert!(out.warnings[0].contains("falling back"));
    }

    #[test]
    fn run_nn_subtraction_separates_planted_senses() {
        let store = bank_store();
        let dataset = Dataset::new(vec![
            record("1", "bank", Some("money"), "money cash loan"),
            record("2", "bank", Some("money"), "cash loan"),
            record("3", "bank", Some("river"), "river shore water"),
            record("4", "bank", Some("river"), "shore water"),
        ]);
        let out =
            run(&dataset, &MethodConfig::new(Method::NnSubtraction), Some(&store)).unwrap();
        let labels: Vec<&str> =
            out.dataset.records.iter().map(|r| r.predict_sense_id.as_deref().unwrap()).collect();
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[2], labels[3]);
        assert_ne!(labels[0], labels[2]);
    }

    #[test]
    fn run_requires_embeddings_for_embedding_methods() {
        let dataset = Dataset::new(vec![record("1", "a", None, "x")]);
        assert_eq!(
            run(&dataset, &MethodConfig::new(Method::NnSubtraction), None).unwrap_err(),
            InduceError::MissingEmbeddings
        );
    }

    #[test]
    fn run_deterministic_for_fixed_seed() {
        let (dataset, store) = planted_word();
        let config = MethodConfig {
            method: Method::Cluster(ClusterMethod::KMeans { k: 2 }),
            scheme: WeightingScheme::Uniform,
            seed: 123,
        };
        let a = run(&dataset, &config, Some(&store)).unwrap();
        let b = run(&dataset, &config, Some(&store)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn run_random_baseline_keeps_output_order() {
        let dataset = Dataset::new(vec![
            record("1", "a", None, "x"),
            record("2", "b", None, "y"),
            record("3", "a", None, "z"),
        ]);
        let config = MethodConfig {
            method: Method::BaselineRandom { k: 4 },
            scheme: WeightingScheme::Uniform,
            seed: 8,
        };
        let out = run(&dataset, &config, None).unwrap();
        let ids: Vec<&str> =
            out.dataset.records.iter().map(|r| r.context_id.as_str()).collect();
        assert_eq!(ids, ["1", "2", "3"]);
        assert!(out.dataset.records.iter().all(|r| r.predict_sense_id.is_some()));
    }
}
