//! Bearer-token sessions. Tokens are configured up front; there is no login.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use axum::extract::{FromRef, FromRequestParts};
use axum::http::header::AUTHORIZATION;
use axum::http::request::Parts;
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::AppState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Annotator,
    Leader,
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "annotator" => Ok(Role::Annotator),
            "leader" => Ok(Role::Leader),
            other => Err(format!("unknown role `{other}`")),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Annotator => "annotator",
            Role::Leader => "leader",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiSession {
    pub annotator: String,
    #[serde(skip_serializing)]
    pub token: String,
    pub role: Role,
}

impl ApiSession {
    pub fn new(annotator: impl Into<String>, token: impl Into<String>, role: Role) -> Self {
        ApiSession { annotator: annotator.into(), token: token.into(), role }
    }

    pub fn is_leader(&self) -> bool {
        self.role == Role::Leader
    }
}

/// Parses `TOKEN=ANNOTATOR:ROLE`.
impl FromStr for ApiSession {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (token, rest) = s.split_once('=').ok_or("expected TOKEN=ANNOTATOR:ROLE")?;
        let (annotator, role) = rest.rsplit_once(':').ok_or("expected TOKEN=ANNOTATOR:ROLE")?;
        if token.is_empty() || annotator.is_empty() {
            return Err("token and annotator must be non-empty".into());
        }
        Ok(ApiSession::new(annotator, token, role.parse()?))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Sessions {
    by_token: HashMap<String, ApiSession>,
}

impl Sessions {
    pub fn new(sessions: impl IntoIterator<Item = ApiSession>) -> Self {
        Sessions { by_token: sessions.into_iter().map(|s| (s.token.clone(), s)).collect() }
    }

    pub fn get(&self, token: &str) -> Option<&ApiSession> {
        self.by_token.get(token)
    }

    pub fn is_empty(&self) -> bool {
        self.by_token.is_empty()
    }
}

impl<S> FromRequestParts<S> for ApiSession
where
    AppState: FromRef<S>,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        let state = AppState::from_ref(state);
        let token = parts
            .headers
            .get(AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .ok_or(ApiError::Unauthorized)?;
        state.sessions.get(token.trim()).cloned().ok_or(ApiError::Unauthorized)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_session_flag() {
        let s: ApiSession = "t0k=maryam:leader".parse().unwrap();
        assert_eq!(s, ApiSession::new("maryam", "t0k", Role::Leader));
        assert!("t0k=maryam".parse::<ApiSession>().is_err());
        assert!("t0k=maryam:admin".parse::<ApiSession>().is_err());
        assert!("=x:leader".parse::<ApiSession>().is_err());
    }

    #[test]
    fn token_is_not_serialized() {
        let v = serde_json::to_value(ApiSession::new("a", "secret", Role::Annotator)).unwrap();
        assert_eq!(v, serde_json::json!({"annotator": "a", "role": "annotator"}));
    }
}
