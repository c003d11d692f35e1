//! Independent oracles and random instance generators shared by the property
//! tests and the acceptance suite. Nothing here calls the code path it is
//! used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use tabfact_core::ensemble::{Example, VoteLayer};
use tabfact_core::textnorm::{normalize, AbbrevTable};
use tabfact_core::{EvidenceVersion, Label, Statement, StatementKey, TableDocument};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub const VOCAB: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "model", "score", "total", "team", "year", "value", "rate",
    "mean",
];

pub fn random_text(rng: &mut StdRng, vocab: &[&str], max_words: usize) -> String {
    let n = rng.gen_range(0..=max_words);
    (0..n)
        .map(|_| *vocab.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Random table with `rows` x `cols` cells of 0-3 words each.
pub fn random_table(
    rng: &mut StdRng,
    id: &str,
    rows: usize,
    cols: usize,
    header_rows: usize,
    vocab: &[&str],
) -> TableDocument {
    let grid = (0..rows)
        .map(|_| (0..cols).map(|_| random_text(rng, vocab, 3)).collect())
        .collect();
    TableDocument::new("doc", id, "", "", grid, header_rows, Vec::new()).unwrap()
}

// ---------------------------------------------------------------- snapshot

fn grams(tokens: &[String], orders: &[usize]) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for &n in orders {
        if n == 0 || tokens.len() < n {
            continue;
        }
        for start in 0..=tokens.len() - n {
            out.push(tokens[start..start + n].to_vec());
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Shared-gram count of every body row. All rows share the statement's gram
/// count as denominator, so counts rank rows exactly like overlap rates.
pub fn brute_row_scores(
    table: &TableDocument,
    statement: &str,
    orders: &[usize],
    abbrevs: &AbbrevTable,
) -> Vec<(usize, usize)> {
    let stmt = grams(&normalize(statement, abbrevs), orders);
    table
        .body_rows()
        .map(|r| {
            let text: Vec<String> = table.row(r).iter().map(|c| c.text.clone()).collect();
            let row = grams(&normalize(&text.join(" "), abbrevs), orders);
            let shared = stmt.iter().filter(|g| row.iter().any(|h| h == *g)).count();
            (r, shared)
        })
        .collect()
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mut rest in subsets(&items[1..], k - 1) {
        rest.insert(0, items[0]);
        out.push(rest);
    }
    out.extend(subsets(&items[1..], k));
    out
}

/// Exhaustive top-K: the unique K-subset in which every chosen row beats every
/// unchosen one, equal scores going to the smaller index.
pub fn brute_snapshot(
    table: &TableDocument,
    statement: &str,
    r: usize,
    orders: &[usize],
    abbrevs: &AbbrevTable,
) -> Vec<usize> {
    let body: Vec<usize> = table.body_rows().collect();
    if body.len() <= r {
        return body;
    }
    let scores: BTreeMap<usize, usize> = brute_row_scores(table, statement, orders, abbrevs)
        .into_iter()
        .collect();
    let beats = |a: usize, b: usize| scores[&a] > scores[&b] || (scores[&a] == scores[&b] && a < b);
    let valid: Vec<Vec<usize>> = subsets(&body, r)
        .into_iter()
        .filter(|s| {
            s.iter()
                .all(|&a| body.iter().filter(|b| !s.contains(b)).all(|&b| beats(a, b)))
        })
        .collect();
    assert_eq!(valid.len(), 1, "top-K subset must be unique");
    valid.into_iter().next().unwrap()
}

// ---------------------------------------------------------------- evidence

/// Per-cell evaluation of rules 1-4; returns the relevant cells and the cells
/// on which each rule fired.
pub struct BruteEvidence {
    pub relevant: BTreeSet<(usize, usize)>,
    pub by_rule: [BTreeSet<(usize, usize)>; 4],
}

pub fn brute_evidence(
    table: &TableDocument,
    statement: &str,
    label: Label,
    abbrevs: &AbbrevTable,
) -> BruteEvidence {
    let (rows, cols, h) = (table.row_count(), table.col_count(), table.header_rows());
    let all: BTreeSet<(usize, usize)> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .collect();
    if label == Label::Entailed {
        return BruteEvidence {
            relevant: all,
            by_rule: Default::default(),
        };
    }
    let bag: Vec<String> = normalize(statement, abbrevs).to_vec();
    let has = |r: usize, c: usize, w: &str| {
        normalize(&table.cell(r, c).unwrap().text, abbrevs)
            .iter()
            .any(|t| t == w)
    };
    let mut by_rule: [BTreeSet<(usize, usize)>; 4] = Default::default();
    for &(r, c) in &all {
        for w in &bag {
            let in_header = (0..h).any(|hr| has(hr, c, w));
            let in_first = r >= h && has(r, 0, w);
            if r >= h && in_header {
                by_rule[0].insert((r, c));
            }
            if in_first {
                by_rule[1].insert((r, c));
            }
            if r >= h && in_header && in_first {
                by_rule[2].insert((r, c));
            }
            if has(r, c, w) {
                by_rule[3].insert((r, c));
            }
        }
    }
    let relevant = by_rule.iter().flatten().copied().collect();
    BruteEvidence { relevant, by_rule }
}

// ---------------------------------------------------------------- scoring

fn naive_f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    let p = if tp + fp == 0 {
        if tp + fn_ == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let r = if tp + fn_ == 0 {
        if tp + fp == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Macro F1 per table over the classes in `classes` that occur in gold or
/// predictions, then the mean over tables with at least one statement.
fn naive_macro(pairs_by_table: &[Vec<(Label, Label)>], classes: &[Label]) -> f64 {
    let mut table_scores = Vec::new();
    for pairs in pairs_by_table {
        if pairs.is_empty() {
            continue;
        }
        let mut f1s = Vec::new();
        for &k in classes {
            let tp = pairs.iter().filter(|(g, p)| *g == k && *p == k).count();
            let fp = pairs.iter().filter(|(g, p)| *g != k && *p == k).count();
            let fn_ = pairs.iter().filter(|(g, p)| *g == k && *p != k).count();
            if tp + fp + fn_ > 0 {
                f1s.push(naive_f1(tp, fp, fn_));
            }
        }
        table_scores.push(if f1s.is_empty() {
            0.0
        } else {
            f1s.iter().sum::<f64>() / f1s.len() as f64
        });
    }
    if table_scores.is_empty() {
        0.0
    } else {
        table_scores.iter().sum::<f64>() / table_scores.len() as f64
    }
}

fn pairs(
    preds: &BTreeMap<StatementKey, Label>,
    gold: &[TableDocument],
    keep: impl Fn(Label) -> bool,
) -> Vec<Vec<(Label, Label)>> {
    gold.iter()
        .map(|t| {
            t.statements()
                .iter()
                .filter_map(|s| {
                    s.gold_label
                        .filter(|&g| keep(g))
                        .map(|g| (g, preds[&t.key(s)]))
                })
                .collect()
        })
        .collect()
}

pub fn naive_3way(preds: &BTreeMap<StatementKey, Label>, gold: &[TableDocument]) -> f64 {
    naive_macro(&pairs(preds, gold, |_| true), &Label::ALL)
}

pub fn naive_2way(preds: &BTreeMap<StatementKey, Label>, gold: &[TableDocument]) -> f64 {
    naive_macro(
        &pairs(preds, gold, |g| g != Label::Unknown),
        &[Label::Entailed, Label::Refuted],
    )
}

pub fn naive_taskb(
    preds: &BTreeMap<StatementKey, BTreeSet<(usize, usize)>>,
    gold: &[TableDocument],
) -> f64 {
    let mut table_scores = Vec::new();
    for t in gold {
        let mut stmt_scores = Vec::new();
        for s in t.statements() {
            if s.gold_label == Some(Label::Unknown) {
                continue;
            }
            let Some(versions) = s.gold_evidence.as_ref().filter(|v| !v.is_empty()) else {
                continue;
            };
            let pred = &preds[&t.key(s)];
            let best = versions
                .iter()
                .map(|v| {
                    let tp = pred.iter().filter(|c| v.relevant_cells.contains(c)).count();
                    naive_f1(tp, pred.len() - tp, v.relevant_cells.len() - tp)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            stmt_scores.push(best);
        }
        if !stmt_scores.is_empty() {
            table_scores.push(stmt_scores.iter().sum::<f64>() / stmt_scores.len() as f64);
        }
    }
    if table_scores.is_empty() {
        0.0
    } else {
        table_scores.iter().sum::<f64>() / table_scores.len() as f64
    }
}

pub struct ScoringInstance {
    pub gold: Vec<TableDocument>,
    pub labels: BTreeMap<StatementKey, Label>,
    pub cells: BTreeMap<StatementKey, BTreeSet<(usize, usize)>>,
}

/// Up to 10 tables of up to 8 statements, random gold labels and evidence,
/// random predictions.
pub fn random_scoring_instance(rng: &mut StdRng) -> ScoringInstance {
    let n_tables = rng.gen_range(1..=10);
    let mut gold = Vec::new();
    let mut labels = BTreeMap::new();
    let mut cells = BTreeMap::new();
    for t in 0..n_tables {
        let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let n_stmts = rng.gen_range(0..=8);
        let mut stmts = Vec::new();
        for s in 0..n_stmts {
            let mut st = Statement::new(
                format!("s{s}"),
                "text",
                Some(Label::ALL[rng.gen_range(0..3)]),
            );
            if rng.gen_bool(0.8) {
                let versions = (0..rng.gen_range(1..=3))
                    .map(|_| {
                        let mut v: BTreeSet<(usize, usize)> = BTreeSet::new();
                        v.insert((rng.gen_range(0..rows), rng.gen_range(0..cols)));
                        for _ in 0..rng.gen_range(0..4) {
                            v.insert((rng.gen_range(0..rows), rng.gen_range(0..cols)));
                        }
                        EvidenceVersion { relevant_cells: v }
                    })
                    .collect();
                st.gold_evidence = Some(versions);
            }
            let key = StatementKey::new(format!("t{t}"), format!("s{s}"));
            labels.insert(key.clone(), Label::ALL[rng.gen_range(0..3)]);
            let pred: BTreeSet<(usize, usize)> = (0..rows)
                .flat_map(|r| (0..cols).map(move |c| (r, c)))
                .filter(|_| rng.gen_bool(0.3))
                .collect();
            cells.insert(key, pred);
            stmts.push(st);
        }
        let grid = vec![vec!["x".to_string(); cols]; rows];
        gold.push(
            TableDocument::new("doc", format!("t{t}"), "", "", grid, 1.min(rows), stmts).unwrap(),
        );
    }
    ScoringInstance {
        gold,
        labels,
        cells,
    }
}

// ---------------------------------------------------------------- ensemble

fn objective(layer: &VoteLayer, examples: &[Example], l2: f64) -> f64 {
    let mut total = 0.0;
    for ex in examples {
        let z = layer.logits(&ex.features).unwrap();
        let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + z.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
        total += lse - z[ex.label.index()];
    }
    let penalty: f64 = layer.weights().iter().map(|w| w * w).sum();
    total / examples.len() as f64 + l2 * penalty
}

/// Central finite differences of the training objective with step `h`, in
/// the layout `weights ++ bias`.
pub fn numeric_gradient(layer: &VoteLayer, examples: &[Example], l2: f64, h: f64) -> Vec<f64> {
    let names = layer.model_names().to_vec();
    let n_w = layer.weights().len();
    let mut out = Vec::with_capacity(n_w + 3);
    for i in 0..n_w + 3 {
        let eval = |delta: f64| {
            let mut w = layer.weights().to_vec();
            let mut b = layer.bias();
            if i < n_w {
                w[i] += delta;
            } else {
                b[i - n_w] += delta;
            }
            objective(&VoteLayer::new(names.clone(), w, b).unwrap(), examples, l2)
        };
        out.push((eval(h) - eval(-h)) / (2.0 * h));
    }
    out
}

pub struct GradInstance {
    pub layer: VoteLayer,
    pub examples: Vec<Example>,
    pub l2: f64,
}

pub fn random_grad_instance(rng: &mut StdRng) -> GradInstance {
    let m = rng.gen_range(1..=6);
    let names: Vec<String> = (0..m).map(|i| format!("model{i}")).collect();
    let weights = (0..9 * m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let bias = [
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ];
    let examples = (0..rng.gen_range(1..=8))
        .map(|_| Example {
            features: (0..3 * m).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            label: Label::ALL[rng.gen_range(0..3)],
        })
        .collect();
    GradInstance {
        layer: VoteLayer::new(names, weights, bias).unwrap(),
        examples,
        l2: rng.gen_range(0.0..0.1),
    }
}

/// Norm-wise relative error `|a - b| / max(|a|, |b|)`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = na.max(nb);
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// 200 score-like points in `[0, 1]^6` (two models) labeled by a planted
/// linear rule: the arg-max of the two models' summed scores. Points with a
/// winning margin under 0.15 are redrawn, so the set is separable with room.
pub fn planted_separable(seed: u64) -> Vec<Example> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    while out.len() < 200 {
        let x: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..1.0)).collect();
        let sums = [x[0] + x[3], x[1] + x[4], x[2] + x[5]];
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| sums[b].total_cmp(&sums[a]));
        if sums[order[0]] - sums[order[1]] < 0.15 {
            continue;
        }
        out.push(Example {
            features: x,
            label: Label::ALL[order[0]],
        });
    }
    out
}
