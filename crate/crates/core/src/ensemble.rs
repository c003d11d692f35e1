//! The vote layer: a single fully-connected layer with softmax over the
//! concatenated score vectors of `M` models, trained by full-batch gradient
//! descent on mean cross-entropy plus an L2 penalty on the weights.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::classify::ScoreVector;
use crate::corpus::{Label, StatementKey};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnsembleError {
    #[error("a vote layer needs at least one model")]
    NoModels,
    #[error("model `{0}` is listed twice")]
    DuplicateModelName(String),
    #[error("expected {expected} weights, got {got}")]
    WeightShape { expected: usize, got: usize },
    #[error("vote layer parameters must be finite")]
    NonFiniteParameter,
    #[error("no scores from model `{model}` for statement {key}")]
    MissingModel { model: String, key: StatementKey },
    #[error("model `{model}` scored statement {key} more than once")]
    DuplicateScore { model: String, key: StatementKey },
    #[error("score from model `{model}` is for {found}, not {key}")]
    ForeignScore {
        model: String,
        key: StatementKey,
        found: StatementKey,
    },
    #[error("expected {expected} features, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("training needs at least one example")]
    NoExamples,
    #[error("invalid training config: {0}")]
    BadConfig(&'static str),
    #[error("loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoteLayer {
    model_names: Vec<String>,
    /// 3 rows of `3 * M` columns, row-major.
    weights: Vec<f64>,
    bias: [f64; 3],
}

impl VoteLayer {
    pub fn new(
        model_names: Vec<String>,
        weights: Vec<f64>,
        bias: [f64; 3],
    ) -> Result<Self, EnsembleError> {
        if model_names.is_empty() {
            return Err(EnsembleError::NoModels);
        }
        for (i, name) in model_names.iter().enumerate() {
            if model_names[..i].contains(name) {
                return Err(EnsembleError::DuplicateModelName(name.clone()));
            }
        }
        let expected = 9 * model_names.len();
        if weights.len() != expected {
            return Err(EnsembleError::WeightShape {
                expected,
                got: weights.len(),
            });
        }
        if !weights.iter().chain(&bias).all(|w| w.is_finite()) {
            return Err(EnsembleError::NonFiniteParameter);
        }
        Ok(VoteLayer {
            model_names,
            weights,
            bias,
        })
    }

    pub fn zeros(model_names: Vec<String>) -> Result<Self, EnsembleError> {
        let n = 9 * model_names.len();
        VoteLayer::new(model_names, vec![0.0; n], [0.0; 3])
    }

    pub fn model_names(&self) -> &[String] {
        &self.model_names
    }

    pub fn feature_len(&self) -> usize {
        3 * self.model_names.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight row for one output class.
    pub fn weight_row(&self, class: usize) -> &[f64] {
        let n = self.feature_len();
        &self.weights[class * n..(class + 1) * n]
    }

    pub fn bias(&self) -> [f64; 3] {
        self.bias
    }

    pub fn logits(&self, features: &[f64]) -> Result<[f64; 3], EnsembleError> {
        if features.len() != self.feature_len() {
            return Err(EnsembleError::Dimension {
                expected: self.feature_len(),
                got: features.len(),
            });
        }
        let mut z = self.bias;
        for (k, zk) in z.iter_mut().enumerate() {
            *zk += dot(self.weight_row(k), features);
        }
        Ok(z)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Concatenates one statement's score vectors in `model_names` order.
pub fn assemble_features(
    key: &StatementKey,
    scores: &[ScoreVector],
    model_names: &[String],
) -> Result<Vec<f64>, EnsembleError> {
    if let Some(s) = scores.iter().find(|s| s.key() != key) {
        return Err(EnsembleError::ForeignScore {
            model: s.model_name().into(),
            key: key.clone(),
            found: s.key().clone(),
        });
    }
    let mut features = Vec::with_capacity(3 * model_names.len());
    for name in model_names {
        let mut found = scores.iter().filter(|s| s.model_name() == name);
        let first = found.next().ok_or_else(|| EnsembleError::MissingModel {
            model: name.clone(),
            key: key.clone(),
        })?;
        if found.next().is_some() {
            return Err(EnsembleError::DuplicateScore {
                model: name.clone(),
                key: key.clone(),
            });
        }
        features.extend(first.scores());
    }
    Ok(features)
}

/// Numerically stable softmax.
pub fn softmax(z: [f64; 3]) -> [f64; 3] {
    let m = z[0].max(z[1]).max(z[2]);
    let e = z.map(|v| libm::exp(v - m));
    let s = e[0] + e[1] + e[2];
    e.map(|v| v / s)
}

fn log_sum_exp(z: [f64; 3]) -> f64 {
    let m = z[0].max(z[1]).max(z[2]);
    m + libm::log(z.iter().map(|v| libm::exp(v - m)).sum::<f64>())
}

pub fn forward(layer: &VoteLayer, features: &[f64]) -> Result<[f64; 3], EnsembleError> {
    layer.logits(features).map(softmax)
}

/// Arg-max with ties resolved in class order Entailed, Refuted, Unknown.
pub fn argmax_label(values: [f64; 3]) -> Label {
    let mut best = 0;
    for i in 1..3 {
        if values[i] > values[best] {
            best = i;
        }
    }
    Label::ALL[best]
}

pub fn predict(layer: &VoteLayer, features: &[f64]) -> Result<Label, EnsembleError> {
    forward(layer, features).map(argmax_label)
}

/// Plurality over each model's own arg-max. A tie between classes is settled
/// by the layer's prediction when one is given, otherwise by class order.
pub fn majority_vote(features: &[f64], layer: Option<&VoteLayer>) -> Result<Label, EnsembleError> {
    if features.is_empty() || !features.len().is_multiple_of(3) {
        return Err(EnsembleError::Dimension {
            expected: 3 * (features.len() / 3).max(1),
            got: features.len(),
        });
    }
    let mut votes = [0usize; 3];
    for block in features.chunks_exact(3) {
        votes[argmax_label([block[0], block[1], block[2]]).index()] += 1;
    }
    let top = votes.iter().copied().max().unwrap_or(0);
    let leaders = votes.iter().filter(|&&v| v == top).count();
    if leaders > 1 {
        if let Some(layer) = layer {
            return predict(layer, features);
        }
    }
    Ok(argmax_label(votes.map(|v| v as f64)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: Vec<f64>,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Kept for reproducibility records; full-batch descent from zero
    /// weights draws no random numbers.
    pub rng_seed: u64,
    pub l2: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 200,
            rng_seed: 0,
            l2: 1e-4,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), EnsembleError> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(EnsembleError::BadConfig("learning_rate must be positive"));
        }
        if self.epochs == 0 {
            return Err(EnsembleError::BadConfig("epochs must be at least 1"));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(EnsembleError::BadConfig("l2 must be non-negative"));
        }
        Ok(())
    }
}

/// Gradient of [`loss_and_gradient`]'s objective, shaped like the layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub weights: Vec<f64>,
    pub bias: [f64; 3],
}

/// Mean cross-entropy over `examples` plus `l2 * ||weights||^2`, and its
/// gradient. The bias is not penalized.
pub fn loss_and_gradient(
    layer: &VoteLayer,
    examples: &[Example],
    l2: f64,
) -> Result<(f64, Gradient), EnsembleError> {
    if examples.is_empty() {
        return Err(EnsembleError::NoExamples);
    }
    let n = layer.feature_len();
    let mut grad = Gradient {
        weights: vec![0.0; 3 * n],
        bias: [0.0; 3],
    };
    let mut loss = 0.0;
    for ex in examples {
        let z = layer.logits(&ex.features)?;
        let y = ex.label.index();
        loss += log_sum_exp(z) - z[y];
        let p = softmax(z);
        for (k, pk) in p.into_iter().enumerate() {
            let delta = pk - if k == y { 1.0 } else { 0.0 };
            grad.bias[k] += delta;
            for (g, x) in grad.weights[k * n..(k + 1) * n]
                .iter_mut()
                .zip(&ex.features)
            {
                *g += delta * x;
            }
        }
    }
    let scale = 1.0 / examples.len() as f64;
    loss *= scale;
    for g in grad.weights.iter_mut().chain(grad.bias.iter_mut()) {
        *g *= scale;
    }
    let mut penalty = 0.0;
    for (g, w) in grad.weights.iter_mut().zip(&layer.weights) {
        penalty += w * w;
        *g += 2.0 * l2 * w;
    }
    Ok((loss + l2 * penalty, grad))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trained {
    pub layer: VoteLayer,
    /// Objective value at the start of each epoch.
    pub loss_trace: Vec<f64>,
}

/// Full-batch gradient descent from zero weights. Deterministic: the same
/// examples and config always produce bitwise-identical parameters.
pub fn train(
    model_names: Vec<String>,
    examples: &[Example],
    config: &TrainConfig,
) -> Result<Trained, EnsembleError> {
    config.validate()?;
    if examples.is_empty() {
        return Err(EnsembleError::NoExamples);
    }
    let mut layer = VoteLayer::zeros(model_names)?;
    for ex in examples {
        if ex.features.len() != layer.feature_len() {
            return Err(EnsembleError::Dimension {
                expected: layer.feature_len(),
                got: ex.features.len(),
            });
        }
    }
    let mut loss_trace = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let (loss, grad) = loss_and_gradient(&layer, examples, config.l2)?;
        if !loss.is_finite() {
            return Err(EnsembleError::NonFiniteLoss { epoch });
        }
        loss_trace.push(loss);
        for (w, g) in layer.weights.iter_mut().zip(&grad.weights) {
            *w -= config.learning_rate * g;
        }
        for (b, g) in layer.bias.iter_mut().zip(&grad.bias) {
            *b -= config.learning_rate * g;
        }
        if !layer
            .weights
            .iter()
            .chain(&layer.bias)
            .all(|w| w.is_finite())
        {
            return Err(EnsembleError::NonFiniteLoss { epoch });
        }
    }
    Ok(Trained { layer, loss_trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| alloc::format!("m{i}")).collect()
    }

    fn sv(model: &str, scores: [f64; 3]) -> ScoreVector {
        ScoreVector::new(model, StatementKey::new("t", "1"), &scores).unwrap()
    }

    #[test]
    fn assemble_examples() {
        let key = StatementKey::new("t", "1");
        let scores = [sv("b", [4.0, 5.0, 6.0]), sv("a", [1.0, 2.0, 3.0])];
        let model_names = ["a".to_string(), "b".to_string()];
        assert_eq!(
            assemble_features(&key, &scores, &model_names).unwrap(),
            [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        );
        assert_eq!(
            assemble_features(&key, &scores[1..], &model_names[..1]).unwrap(),
            [1.0, 2.0, 3.0]
        );
        let err = assemble_features(&key, &scores, &["a".to_string(), "tapas_wsmlr".to_string()]);
        assert!(
            matches!(err, Err(EnsembleError::MissingModel { model, .. }) if model == "tapas_wsmlr")
        );
        let twice = [sv("a", [0.0; 3]), sv("a", [1.0; 3])];
        assert!(matches!(
            assemble_features(&key, &twice, &model_names[..1]),
            Err(EnsembleError::DuplicateScore { .. })
        ));
        let other = [ScoreVector::new("a", StatementKey::new("t", "2"), &[0.0; 3]).unwrap()];
        assert!(matches!(
            assemble_features(&key, &other, &model_names[..1]),
            Err(EnsembleError::ForeignScore { .. })
        ));
    }

    #[test]
    fn zero_layer_is_uniform() {
        let layer = VoteLayer::zeros(names(2)).unwrap();
        let p = forward(&layer, &[1.0, -3.0, 7.0, 0.5, 0.0, 2.0]).unwrap();
        for v in p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(argmax_label(p), Label::Entailed);
        assert!(matches!(
            forward(&layer, &[1.0]),
            Err(EnsembleError::Dimension {
                expected: 6,
                got: 1
            })
        ));
    }

    #[test]
    fn identity_block_prefers_entailed() {
        let w = vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let layer = VoteLayer::new(names(1), w, [0.0; 3]).unwrap();
        let p = forward(&layer, &[10.0, 0.0, 0.0]).unwrap();
        // softmax(10, 0, 0) = (e^10, 1, 1) / (e^10 + 2)
        let e10 = libm::exp(10.0);
        assert!((p[0] - e10 / (e10 + 2.0)).abs() < 1e-15);
        assert_eq!(predict(&layer, &[10.0, 0.0, 0.0]).unwrap(), Label::Entailed);
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(argmax_label([0.5, 0.3, 0.2]), Label::Entailed);
        assert_eq!(argmax_label([1.0 / 3.0; 3]), Label::Entailed);
        assert_eq!(argmax_label([0.1, 0.2, 0.7]), Label::Unknown);
        assert_eq!(argmax_label([0.1, 0.45, 0.45]), Label::Refuted);
    }

    #[test]
    fn layer_validation() {
        assert_eq!(VoteLayer::zeros(vec![]), Err(EnsembleError::NoModels));
        assert!(matches!(
            VoteLayer::zeros(vec!["a".into(), "a".into()]),
            Err(EnsembleError::DuplicateModelName(_))
        ));
        assert!(matches!(
            VoteLayer::new(names(1), vec![0.0; 8], [0.0; 3]),
            Err(EnsembleError::WeightShape {
                expected: 9,
                got: 8
            })
        ));
        assert_eq!(
            VoteLayer::new(names(1), vec![f64::NAN; 9], [0.0; 3]),
            Err(EnsembleError::NonFiniteParameter)
        );
    }

    #[test]
    fn majority_vote_plurality_and_ties() {
        // Votes E, E, R.
        let f = [0.9, 0.1, 0.0, 0.6, 0.3, 0.1, 0.1, 0.8, 0.1];
        assert_eq!(majority_vote(&f, None).unwrap(), Label::Entailed);
        // Votes E, R: tie -> layer decides.
        let f = [0.9, 0.1, 0.0, 0.1, 0.8, 0.1];
        assert_eq!(majority_vote(&f, None).unwrap(), Label::Entailed);
        let layer = VoteLayer::new(names(2), vec![0.0; 18], [0.0, 0.0, 1.0]).unwrap();
        assert_eq!(majority_vote(&f, Some(&layer)).unwrap(), Label::Unknown);
        assert!(majority_vote(&[1.0, 2.0], None).is_err());
    }

    #[test]
    fn single_example_is_fit() {
        let ex = [Example {
            features: vec![0.2, 0.3, 0.5],
            label: Label::Refuted,
        }];
        let trained = train(names(1), &ex, &TrainConfig::default()).unwrap();
        assert_eq!(
            predict(&trained.layer, &ex[0].features).unwrap(),
            Label::Refuted
        );
        assert_eq!(trained.loss_trace.len(), 200);
    }

    #[test]
    fn train_rejects_bad_input() {
        assert_eq!(
            train(names(1), &[], &TrainConfig::default()),
            Err(EnsembleError::NoExamples)
        );
        let ex = [Example {
            features: vec![1.0],
            label: Label::Entailed,
        }];
        assert!(matches!(
            train(names(1), &ex, &TrainConfig::default()),
            Err(EnsembleError::Dimension { .. })
        ));
        let bad = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert!(matches!(
            train(names(1), &ex, &bad),
            Err(EnsembleError::BadConfig(_))
        ));
    }

    #[test]
    fn divergence_reports_epoch() {
        let ex = [Example {
            features: vec![1e300, 0.0, 0.0],
            label: Label::Refuted,
        }];
        let cfg = TrainConfig {
            learning_rate: 1e10,
            ..TrainConfig::default()
        };
        assert!(matches!(
            train(names(1), &ex, &cfg),
            Err(EnsembleError::NonFiniteLoss { .. })
        ));
    }

    fn example_strategy(m: usize) -> impl Strategy<Value = Example> {
        (proptest::collection::vec(-3.0f64..3.0, 3 * m), 0usize..3).prop_map(|(features, l)| {
            Example {
                features,
                label: Label::ALL[l],
            }
        })
    }

    proptest! {
        #[test]
        fn forward_is_a_distribution(
            w in proptest::collection::vec(-5.0f64..5.0, 18),
            b in proptest::array::uniform3(-5.0f64..5.0),
            x in proptest::collection::vec(-5.0f64..5.0, 6),
            c in -100.0f64..100.0,
        ) {
            let layer = VoteLayer::new(names(2), w.clone(), b).unwrap();
            let p = forward(&layer, &x).unwrap();
            prop_assert!(p.iter().all(|&v| v > 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            // Shifting every logit by c moves nothing.
            let shifted = VoteLayer::new(names(2), w, b.map(|v| v + c)).unwrap();
            let q = forward(&shifted, &x).unwrap();
            for k in 0..3 {
                prop_assert!((p[k] - q[k]).abs() < 1e-9);
            }
            prop_assert_eq!(argmax_label(p), predict(&shifted, &x).unwrap());
        }

        #[test]
        fn permuting_models_is_equivariant(
            w in proptest::collection::vec(-2.0f64..2.0, 27),
            x in proptest::collection::vec(-2.0f64..2.0, 9),
        ) {
            let layer = VoteLayer::new(names(3), w.clone(), [0.1, 0.2, 0.3]).unwrap();
            // Reverse model order: move feature blocks and weight column blocks together.
            let perm = [2usize, 1, 0];
            let mut w2 = vec![0.0; 27];
            let mut x2 = vec![0.0; 9];
            for (new_b, &old_b) in perm.iter().enumerate() {
                for j in 0..3 {
                    x2[3 * new_b + j] = x[3 * old_b + j];
                    for k in 0..3 {
                        w2[k * 9 + 3 * new_b + j] = w[k * 9 + 3 * old_b + j];
                    }
                }
            }
            let names2 = perm.iter().map(|&i| alloc::format!("m{i}")).collect();
            let layer2 = VoteLayer::new(names2, w2, [0.1, 0.2, 0.3]).unwrap();
            let p = forward(&layer, &x).unwrap();
            let q = forward(&layer2, &x2).unwrap();
            for k in 0..3 {
                prop_assert!((p[k] - q[k]).abs() < 1e-12);
            }
        }

        #[test]
        fn training_is_deterministic(examples in proptest::collection::vec(example_strategy(2), 1..12)) {
            let cfg = TrainConfig { epochs: 20, ..TrainConfig::default() };
            let a = train(names(2), &examples, &cfg).unwrap();
            let b = train(names(2), &examples, &cfg).unwrap();
            let bits = |t: &Trained| t.layer.weights().iter().map(|w| w.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&a), bits(&b));
        }
    }
}
