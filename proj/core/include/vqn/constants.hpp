#pragma once

namespace vqn {

/// Absolute tolerance used for all hermiticity, trace and norm checks.
inline constexpr double kNumericTolerance = 1e-10;

/// Eigenvalues closer than this are treated as one spectral level.
inline constexpr double kLevelTolerance = 1e-9;

namespace limits {

/// Hard cap on pure-state simulation size (2^n amplitudes, dense).
inline constexpr int kMaxStateQubits = 14;

/// Runtime cap on density-matrix simulation size (2^n x 2^n, dense).
/// Defaults to 10; the CLI exposes it as --max-dm-qubits.
int max_density_qubits();
void set_max_density_qubits(int n);

} // namespace limits
} // namespace vqn
