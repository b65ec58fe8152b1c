use crate::error::{Error, Result};

/// Scalar parameters of a problem instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub epsilon: f64,
}

fn violated(key: &'static str, inequality: impl Into<String>, detail: String) -> Error {
    Error::Admissibility {
        key,
        inequality: inequality.into(),
        detail,
    }
}

impl ProblemParams {
    /// p < 0 < q and n ≥ 2.
    pub fn check_standing(&self) -> Result<()> {
        if self.n < 2 {
            return Err(violated("n", "n >= 2", format!("n = {}", self.n)));
        }
        if !(self.p < 0.0) {
            return Err(violated("p", "p < 0", format!("p = {}", self.p)));
        }
        if !(self.q > 0.0) || !self.q.is_finite() {
            return Err(violated("q", "q > 0", format!("q = {}", self.q)));
        }
        Ok(())
    }

    /// Integrability of the weight |x′|^α|x_n|^β against the admissible bodies.
    pub fn check_weights(&self) -> Result<()> {
        let n = self.n as f64;
        let (p, q) = (self.p, self.q);
        let alpha_min = (1.0 - n).max(1.0 - n + p * (1.0 - q) / q);
        let beta_min = (-1.0f64).max(-1.0 + p * (n - 1.0 - q) / q);
        if !(self.alpha > alpha_min) {
            return Err(violated(
                "alpha",
                "alpha > max{1-n, 1-n+p(1-q)/q}",
                format!("alpha = {}, bound {alpha_min}", self.alpha),
            ));
        }
        if !(self.beta > beta_min) {
            return Err(violated(
                "beta",
                "beta > max{-1, -1+p(n-1-q)/q}",
                format!("beta = {}, bound {beta_min}", self.beta),
            ));
        }
        Ok(())
    }

    /// 0 < ε < 1/2.
    pub fn check_epsilon(eps: f64) -> Result<()> {
        if !(eps > 0.0 && eps < 0.5) {
            return Err(violated("eps", "0 < eps < 1/2", format!("eps = {eps}")));
        }
        Ok(())
    }

    /// The δ window for the construction: (1−q, −p) for q < 1, (0, −p) for
    /// q = 1 and (−p(q−1)/q, −p) for q > 1.
    pub fn delta_window(p: f64, q: f64) -> (f64, f64, &'static str) {
        if q < 1.0 {
            (1.0 - q, -p, "delta in (1-q, -p)")
        } else if q == 1.0 {
            (0.0, -p, "delta in (0, -p)")
        } else {
            (-p * (q - 1.0) / q, -p, "delta in (-p(q-1)/q, -p)")
        }
    }

    pub fn check_delta(&self) -> Result<()> {
        let (lo, hi, text) = Self::delta_window(self.p, self.q);
        if !(self.delta > lo && self.delta < hi) {
            return Err(violated(
                "delta",
                text,
                format!("delta = {}, window ({lo}, {hi})", self.delta),
            ));
        }
        Ok(())
    }

    /// Every admissibility condition of the construction.
    pub fn validate(&self) -> Result<()> {
        self.check_standing()?;
        if self.q < 1.0 && !(self.p < self.q - 1.0) {
            return Err(violated(
                "p",
                "p < q-1",
                format!("p = {}, q - 1 = {}", self.p, self.q - 1.0),
            ));
        }
        self.check_weights()?;
        if !(self.alpha >= 0.0) || !(self.beta >= 0.0) {
            return Err(violated(
                "alpha",
                "alpha >= 0 and beta >= 0",
                format!("alpha = {}, beta = {}", self.alpha, self.beta),
            ));
        }
        self.check_delta()?;
        Self::check_epsilon(self.epsilon)
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ProblemParams {
        ProblemParams {
            n: 2,
            p: -1.0,
            q: 0.5,
            alpha: 0.0,
            beta: 0.0,
            delta: 0.75,
            epsilon: 0.1,
        }
    }

    #[test]
    fn admissible_instance_passes() {
        base().validate().unwrap();
    }

    #[test]
    fn violations_name_the_inequality() {
        let e = base().with_epsilon(0.5).validate().unwrap_err();
        assert!(e.to_string().contains("0 < eps < 1/2"));
        let e = ProblemParams { p: -0.4, ..base() }.validate().unwrap_err();
        assert!(e.to_string().contains("p < q-1 violated"), "{e}");
        let e = ProblemParams { delta: 0.2, ..base() }.validate().unwrap_err();
        assert!(e.to_string().contains("delta in (1-q, -p)"));
        assert!(e.is_config());
    }
}
