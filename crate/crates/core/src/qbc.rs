//! Single-trit commitment: commit to one of the three protocol states,
//! measure it on the receiving side, and check the sender's later claim
//! against the recorded clicks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{self, ApparatusParams, ClickRecord, PolarizedState, STATE_COUNT};

/// The sender's statement "I sent protocol state `index`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Claim(u8);

impl Claim {
    pub fn new(index: usize) -> Result<Self> {
        if index < STATE_COUNT {
            Ok(Self(index as u8))
        } else {
            Err(Error::StateIndex(index))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> [Claim; 3] {
        [Claim(0), Claim(1), Claim(2)]
    }
}

impl TryFrom<u8> for Claim {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Claim::new(value as usize)
    }
}

impl From<Claim> for u8 {
    fn from(c: Claim) -> u8 {
        c.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationPolicy {
    /// Reject only on a vertical click in the claimed branch, an event of
    /// probability zero under the claimed state.
    #[default]
    ImpossibilityOnly,
    /// Additionally require every horizontal detector to have fired.
    StrictHorizontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnveilCheck {
    Accept,
    Reject,
}

impl UnveilCheck {
    pub fn is_accept(self) -> bool {
        self == UnveilCheck::Accept
    }
}

pub fn commit(color_index: usize, params: &ApparatusParams) -> Result<PolarizedState> {
    optics::protocol_state(color_index, params)
}

pub fn measure_commitment<R: Rng + ?Sized>(
    state: PolarizedState,
    params: &ApparatusParams,
    rng: &mut R,
) -> Result<ClickRecord> {
    let mu = optics::branch_intensities(state, params)?;
    optics::sample_clicks(&mu, params, rng)
}

pub fn verify_unveil(claim: Claim, record: &ClickRecord, policy: VerificationPolicy) -> UnveilCheck {
    let impossible = record.v_click[claim.index()];
    let reject = match policy {
        VerificationPolicy::ImpossibilityOnly => impossible,
        VerificationPolicy::StrictHorizontal => impossible || record.h_click.iter().any(|&c| !c),
    };
    if reject {
        UnveilCheck::Reject
    } else {
        UnveilCheck::Accept
    }
}

/// Identify the committed state from the clicks alone, with certainty.
///
/// A vertical click in branch `k` rules out state `k`. When exactly two
/// states are ruled out the survivor is returned; otherwise `None`.
pub fn discriminate_unaided(record: &ClickRecord) -> Option<Claim> {
    let excluded = record.v_click.iter().filter(|&&c| c).count();
    if excluded != 2 {
        return None;
    }
    record.v_click.iter().position(|&c| !c).map(|k| Claim(k as u8))
}
