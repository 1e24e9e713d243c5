#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iongrad/constants.hpp"
#include "iongrad/hyperfine.hpp"

namespace iongrad {

using Vector4c = Eigen::Vector4cd;
using Matrix4c = Eigen::Matrix4cd;

// Which single-ion model supplies level splittings (pulse carriers) and the free
// Hamiltonian: the exact eigensystem, the secular approximation with natural
// ratios, with the splitting-matched effective frequencies, or with the published
// fitted ratios (range-limited).
enum class SpinModel { exact, natural, matched, fitted };

// The 4x4 Hamiltonian for the chosen model (the exact one is non-diagonal).
// Rejects species with nuclear_spin != 1/2.
SingleIonHamiltonian single_ion_hamiltonian(const IonSpecies& species, double b_field,
                                            SpinModel model);

enum class DriveTarget { nuclear, electron };

// One rectangular pulse of a transverse cosine drive
//   H_d(t) = 2 * rabi * cos(carrier * t + phase) * X,  X = I_x or S_x,
// so a resonant pulse flips the addressed transition at angular rate `rabi`
// (pi pulse: duration = pi/rabi).
struct Pulse {
  double carrier = 0.0;   // rad/s
  double rabi = 0.0;      // rad/s
  double duration = 0.0;  // s
  double phase = 0.0;     // rad
  DriveTarget target = DriveTarget::nuclear;
  std::pair<int, int> levels = {basis_uu, basis_ud};  // addressed basis pair

  bool is_pi_pulse() const;
};

// Copy of p with the given Rabi rate, duration rescaled to keep rabi*duration.
Pulse with_rabi(const Pulse& p, double rabi);

// The drive operator X for a target (I_x or S_x).
Eigen::Matrix4d drive_operator(DriveTarget target);

struct DrivenHamiltonian {
  Eigen::Matrix4d h0;  // rad/s, real symmetric
  Pulse pulse;
};

struct EvolveOptions {
  double tolerance = 1e-8;   // step-doubling certification, state max-norm
  long min_steps = 1024;     // first rung of the step ladder
  long max_steps = 1L << 23; // give up (numerical error) beyond this
  long fixed_steps = 0;      // > 0: use exactly this count, no certification
};

// Propagate psi0 for `duration` under h0 + drive. Integrator: interaction-picture
// midpoint exponential (unitary to machine precision per step, second-order in
// dt); the step count is doubled until two successive resolutions agree to
// `tolerance` in max-norm. Norm is preserved to ~1e-14.
Vector4c evolve(const Vector4c& psi0, const DrivenHamiltonian& driven, double duration,
                const EvolveOptions& options = {});

// Full propagator (columns = evolved basis states).
Matrix4c propagator(const DrivenHamiltonian& driven, double duration,
                    const EvolveOptions& options = {});

// Rotating-frame propagator keeping only co-rotating drive terms (one matrix
// exponential), returned in the lab frame. Exact within the rotating-wave
// approximation; useful as an analytic cross-check of `evolve`.
Matrix4c rwa_propagator(const DrivenHamiltonian& driven, double duration);

// Conditional-flip pulse specs. Both require B >= 0.5 T (secular regime) and
// nuclear_spin = 1/2; `model` selects the carrier's level structure; `rabi`
// defaults to A/2000.
//
// cnot_si_pulse: nuclear flip |+1/2,+1/2> <-> |+1/2,-1/2>, electron = control.
// cnot_is_pulse: electron flip |+1/2,+1/2> <-> |-1/2,+1/2>, nucleus = control.
Pulse cnot_si_pulse(const IonSpecies& species, double b_field, SpinModel model,
                    double rabi = 0.0);
Pulse cnot_is_pulse(const IonSpecies& species, double b_field, SpinModel model,
                    double rabi = 0.0);

enum class SwapOrder { si_is_si, is_si_is };

// Three alternating conditional flips realizing SWAP between the electron and
// nuclear qubits of one ion.
std::vector<Pulse> swap_sequence(const IonSpecies& species, double b_field,
                                 SpinModel model, SwapOrder order,
                                 double rabi = 0.0);

// Squared overlap |<psi_secular | psi_exact>|^2 after the conditional nuclear-flip
// pi pulse, both evolutions starting from |+1/2,+1/2> and driven by the same
// pulse. `model` selects the secular Hamiltonian and the carrier (default: the
// splitting-matched effective model, whose carrier is the exact splitting).
struct FidelityPoint {
  double b_field = 0.0;   // T
  double fidelity = 0.0;  // squared overlap
};
std::vector<FidelityPoint> cnot_fidelity_curve(const IonSpecies& species,
                                               const std::vector<double>& b_fields,
                                               SpinModel model = SpinModel::matched,
                                               double rabi = 0.0,
                                               int initial = basis_uu,
                                               const EvolveOptions& options = {});

// Propagator of the two-spin coupling H = -(1/2) J Sz Sz for time t: diagonal
// phases exp(+i J t/8) on aligned and exp(-i J t/8) on anti-aligned states.
// The differential (entangling) phase is J t / 4.
Matrix4c two_qubit_conditional_phase(double j_pair, double duration);

// Time at which the conditional phase becomes maximally entangling
// (J t / 4 = pi/2): t = 2 pi / J.
double entangling_time(double j_pair);

}  // namespace iongrad
