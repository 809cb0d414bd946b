use serde::{Deserialize, Serialize};

use crate::error::{CptError, Result};
use crate::valuation::CptAgent;
use crate::value::ValueParams;
use crate::weighting::WeightingParams;

/// JSON form of a [`CptAgent`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub p0_minus: f64,
    pub gamma_minus: f64,
    pub p0_plus: f64,
    pub gamma_plus: f64,
    pub m_minus: f64,
    #[serde(rename = "V_minus")]
    pub v_minus: f64,
    pub a_minus: f64,
    pub m_plus: f64,
    #[serde(rename = "V_plus")]
    pub v_plus: f64,
    pub a_plus: f64,
}

impl AgentSpec {
    /// Validates in declaration order and names the first violated
    /// constraint.
    pub fn to_agent(&self) -> Result<CptAgent> {
        let w_minus = weighting(self.p0_minus, self.gamma_minus, "minus")?;
        let w_plus = weighting(self.p0_plus, self.gamma_plus, "plus")?;
        let value = ValueParams::new(
            self.m_minus,
            self.v_minus,
            self.a_minus,
            self.m_plus,
            self.v_plus,
            self.a_plus,
        )?;
        Ok(CptAgent::new(value, w_minus, w_plus))
    }

    pub fn from_agent(agent: &CptAgent) -> Self {
        let l = agent.value.losses();
        let g = agent.value.gains();
        AgentSpec {
            p0_minus: agent.w_minus.p0(),
            gamma_minus: agent.w_minus.gamma(),
            p0_plus: agent.w_plus.p0(),
            gamma_plus: agent.w_plus.gamma(),
            m_minus: l.slope,
            v_minus: l.offset,
            a_minus: l.rate,
            m_plus: g.slope,
            v_plus: g.offset,
            a_plus: g.rate,
        }
    }

    /// Parses and validates an agent document.
    pub fn parse(json: &str) -> Result<CptAgent> {
        let de = &mut serde_json::Deserializer::from_str(json);
        let spec: AgentSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CptError::scenario(
                if path == "." { "agent".to_string() } else { path },
                e.into_inner().to_string(),
            )
        })?;
        spec.to_agent()
    }
}

fn weighting(p0: f64, gamma: f64, side: &str) -> Result<WeightingParams> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(CptError::constraint(
            format!("0 < p0_{side} < 1"),
            format!("got p0_{side} = {p0}"),
        ));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(CptError::constraint(
            format!("0 < gamma_{side} <= 1"),
            format!("got gamma_{side} = {gamma}"),
        ));
    }
    WeightingParams::new(p0, gamma)
}
