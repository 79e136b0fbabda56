// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite only; see `tests/acceptance.rs`.
