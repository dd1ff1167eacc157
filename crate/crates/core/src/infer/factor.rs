/// Non-negative table over an ordered scope of variables (last fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    scope: Vec<usize>,
    cards: Vec<usize>,
    values: Vec<f64>,
}

fn strides(cards: &[usize]) -> Vec<usize> {
    let mut s = vec![1; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cards[i + 1];
    }
    s
}

impl Factor {
    pub fn new(scope: Vec<usize>, cards: Vec<usize>, values: Vec<f64>) -> Self {
        assert_eq!(scope.len(), cards.len());
        assert_eq!(values.len(), cards.iter().product::<usize>());
        debug_assert!(values.iter().all(|v| *v >= 0.0));
        Factor { scope, cards, values }
    }

    pub fn scalar(value: f64) -> Self {
        Factor::new(Vec::new(), Vec::new(), vec![value])
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn contains(&self, var: usize) -> bool {
        self.scope.contains(&var)
    }

    fn position(&self, var: usize) -> Option<usize> {
        self.scope.iter().position(|&v| v == var)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn scale(&mut self, by: f64) {
        self.values.iter_mut().for_each(|v| *v *= by);
    }

    /// Pointwise product over the union scope (self's variables first).
    pub fn product(&self, other: &Factor) -> Factor {
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        for (&v, &c) in other.scope.iter().zip(&other.cards) {
            if !scope.contains(&v) {
                scope.push(v);
                cards.push(c);
            }
        }
        let sa = strides(&self.cards);
        let sb = strides(&other.cards);
        let step_a: Vec<usize> = scope.iter().map(|&v| self.position(v).map_or(0, |p| sa[p])).collect();
        let step_b: Vec<usize> = scope.iter().map(|&v| other.position(v).map_or(0, |p| sb[p])).collect();
        let total: usize = cards.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut assign = vec![0usize; scope.len()];
        let (mut ia, mut ib) = (0usize, 0usize);
        for _ in 0..total {
            values.push(self.values[ia] * other.values[ib]);
            for pos in (0..scope.len()).rev() {
                assign[pos] += 1;
                ia += step_a[pos];
                ib += step_b[pos];
                if assign[pos] < cards[pos] {
                    break;
                }
                ia -= step_a[pos] * cards[pos];
                ib -= step_b[pos] * cards[pos];
                assign[pos] = 0;
            }
        }
        Factor { scope, cards, values }
    }

    /// Marginalize `var` out; no-op when absent.
    pub fn sum_out(&self, var: usize) -> Factor {
        let Some(pos) = self.position(var) else {
            return self.clone();
        };
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        let out_strides = strides(&cards);
        let mut step: Vec<usize> = Vec::with_capacity(self.scope.len());
        let mut k = 0;
        for i in 0..self.scope.len() {
            if i == pos {
                step.push(0);
            } else {
                step.push(out_strides[k]);
                k += 1;
            }
        }
        let mut values = vec![0.0; cards.iter().product()];
        let mut assign = vec![0usize; self.scope.len()];
        let mut it = 0usize;
        for &v in &self.values {
            values[it] += v;
            for p in (0..self.scope.len()).rev() {
                assign[p] += 1;
                it += step[p];
                if assign[p] < self.cards[p] {
                    break;
                }
                it -= step[p] * self.cards[p];
                assign[p] = 0;
            }
        }
        Factor { scope, cards, values }
    }

    /// Restrict `var` to `level` and drop it from the scope.
    pub fn reduce(&self, var: usize, level: usize) -> Factor {
        let Some(pos) = self.position(var) else {
            return self.clone();
        };
        let src_strides = strides(&self.cards);
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        let mut step = src_strides.clone();
        step.remove(pos);
        let total: usize = cards.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut assign = vec![0usize; scope.len()];
        let mut is = level * src_strides[pos];
        for _ in 0..total {
            values.push(self.values[is]);
            for p in (0..scope.len()).rev() {
                assign[p] += 1;
                is += step[p];
                if assign[p] < cards[p] {
                    break;
                }
                is -= step[p] * cards[p];
                assign[p] = 0;
            }
        }
        Factor { scope, cards, values }
    }
}
