//! Binary classification metrics with `1` as the positive class.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn from_predictions(truth: &[u8], predicted: &[u8]) -> Self {
        let mut c = Confusion::default();
        for (&t, &p) in truth.iter().zip(predicted) {
            match (t, p) {
                (1, 1) => c.tp += 1,
                (0, 1) => c.fp += 1,
                (1, _) => c.fn_ += 1,
                _ => c.tn += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Same counts with the roles of the classes exchanged.
    pub fn swapped(&self) -> Confusion {
        Confusion {
            tp: self.tn,
            fp: self.fn_,
            tn: self.tp,
            fn_: self.fp,
        }
    }

    /// Accuracy, precision and F-measure. With `macro_average` precision and
    /// F-measure are averaged over both classes.
    pub fn metrics(&self, macro_average: bool) -> FoldMetrics {
        let accuracy = ratio(self.tp + self.tn, self.total());
        if macro_average {
            let (p1, f1) = self.positive_scores();
            let (p0, f0) = self.swapped().positive_scores();
            FoldMetrics {
                accuracy,
                precision: (p0 + p1) / 2.0,
                f_measure: (f0 + f1) / 2.0,
            }
        } else {
            let (precision, f_measure) = self.positive_scores();
            FoldMetrics {
                accuracy,
                precision,
                f_measure,
            }
        }
    }

    fn positive_scores(&self) -> (f64, f64) {
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        let f = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        (precision, f)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FoldMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub f_measure: f64,
}

impl FoldMetrics {
    pub fn mean(folds: &[FoldMetrics]) -> FoldMetrics {
        if folds.is_empty() {
            return FoldMetrics::default();
        }
        let n = folds.len() as f64;
        let mut m = FoldMetrics::default();
        for f in folds {
            m.accuracy += f.accuracy;
            m.precision += f.precision;
            m.f_measure += f.f_measure;
        }
        m.accuracy /= n;
        m.precision /= n;
        m.f_measure /= n;
        m
    }
}
