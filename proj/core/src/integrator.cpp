#include "fracvisc/integrator.hpp"

#include "fracvisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace fracvisc
{

namespace
{

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// sum_{l=first}^{n} w[l] * hist.row(n - l), accumulated into out.
void lag_sum(const std::vector<double> &w, const RowMatrix &hist, std::size_t n, std::size_t first,
             Eigen::VectorXd &out)
{
   const auto m = static_cast<std::size_t>(hist.cols());
   double *acc = out.data();
   std::fill(acc, acc + m, 0.0);
   const double *base = hist.data();
   for (std::size_t l = first; l <= n; ++l)
   {
      const double wl = w[l];
      const double *row = base + (n - l) * m;
      for (std::size_t k = 0; k < m; ++k) { acc[k] += wl * row[k]; }
   }
}

void append_number(std::string &line, double x)
{
   char buf[32];
   const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
   line.append(buf, static_cast<std::size_t>(len));
}

} // namespace

std::size_t IntegratorConfig::steps() const
{
   return static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
}

void IntegratorConfig::validate() const
{
   if (!(dt > 0.0) || !std::isfinite(dt))
   {
      throw ValidationError("integrator: dt must be positive");
   }
   if (!(T >= dt) || !std::isfinite(T))
   {
      throw ValidationError("integrator: T must be >= dt");
   }
   if (steps() > max_steps)
   {
      std::ostringstream os;
      os << "integrator: T/dt = " << steps() << " exceeds max_steps = " << max_steps;
      throw ValidationError(os.str());
   }
   ml_policy.validate();
}

EnergySample energy(const ModalSystem &sys, const Eigen::Ref<const Eigen::VectorXd> &d,
                    const Eigen::Ref<const Eigen::VectorXd> &v)
{
   if (d.size() != static_cast<Eigen::Index>(sys.modes()) || v.size() != d.size())
   {
      throw ValidationError("energy: state length differs from mode count");
   }
   EnergySample e;
   e.kinetic = sys.rho() * v.squaredNorm();
   e.elastic = (1.0 - sys.gamma_bar()) * sys.lambda().dot(d.cwiseProduct(d));
   e.total = e.kinetic + e.elastic;
   return e;
}

Trajectory solve(const ModalSystem &sys, const IntegratorConfig &cfg)
{
   cfg.validate();
   const std::size_t N = cfg.steps();
   const auto m = static_cast<Eigen::Index>(sys.modes());
   const double dt = cfg.dt;
   const double rho = sys.rho();
   const std::size_t nk = sys.kernels().size();

   std::vector<ConvolutionRule> rules;
   rules.reserve(nk);
   for (const auto &k : sys.kernels())
   {
      rules.push_back(make_rule(k, dt, N, cfg.convolution, cfg.ml_policy));
   }

   // Effective matrix of the average-acceleration update.
   const double mass_coef = 4.0 * rho / (dt * dt);
   Eigen::MatrixXd K_eff = sys.lambda().asDiagonal();
   K_eff.diagonal().array() += mass_coef;
   if (cfg.implicit_lag)
   {
      for (std::size_t i = 0; i < nk; ++i)
      {
         K_eff -= rules[i].newest_weight() * sys.couplings()[i];
      }
   }
   Eigen::PartialPivLU<Eigen::MatrixXd> lu(K_eff);
   if (!(lu.rcond() > 1e-14))
   {
      std::ostringstream os;
      os << "solve: effective matrix is singular (rcond " << lu.rcond() << ") at dt = " << dt;
      throw NumericalError(os.str());
   }

   Trajectory traj;
   traj.times.resize(N + 1);
   for (std::size_t n = 0; n <= N; ++n) { traj.times[n] = static_cast<double>(n) * dt; }
   RowMatrix D(static_cast<Eigen::Index>(N + 1), m);
   traj.v.resize(static_cast<Eigen::Index>(N + 1), m);
   traj.a.resize(static_cast<Eigen::Index>(N + 1), m);
   traj.memory.assign(nk, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N + 1), m));
   traj.energy.resize(N + 1);

   Eigen::VectorXd d = sys.d0();
   Eigen::VectorXd v = sys.v0();
   // the memory integral vanishes at t = 0
   Eigen::VectorXd a = (sys.load().value(0.0) - sys.lambda().cwiseProduct(d)) / rho;
   D.row(0) = d.transpose();
   traj.v.row(0) = v.transpose();
   traj.a.row(0) = a.transpose();
   traj.energy[0] = energy(sys, d, v);

   std::vector<Eigen::VectorXd> history(nk, Eigen::VectorXd::Zero(m));
   Eigen::VectorXd rhs(m), d_next(m), a_next(m);
   for (std::size_t n = 0; n < N; ++n)
   {
      const std::size_t next = n + 1;
      rhs = sys.load().value(traj.times[next]);
      for (std::size_t i = 0; i < nk; ++i)
      {
         lag_sum(rules[i].sample_weights, D, next, 1, history[i]);
         history[i] -= rules[i].start_correction[next] * D.row(0).transpose();
         if (cfg.implicit_lag)
         {
            rhs.noalias() += sys.couplings()[i] * history[i];
         }
         else
         {
            rhs.noalias() += sys.couplings()[i] * (history[i] + rules[i].newest_weight() * d);
         }
      }
      rhs += mass_coef * (d + dt * v) + rho * a;
      d_next = lu.solve(rhs);
      a_next = (4.0 / (dt * dt)) * (d_next - d - dt * v) - a;
      v += 0.5 * dt * (a + a_next);
      a = a_next;
      d = d_next;

      D.row(static_cast<Eigen::Index>(next)) = d.transpose();
      traj.v.row(static_cast<Eigen::Index>(next)) = v.transpose();
      traj.a.row(static_cast<Eigen::Index>(next)) = a.transpose();
      traj.energy[next] = energy(sys, d, v);
      for (std::size_t i = 0; i < nk; ++i)
      {
         traj.memory[i].row(static_cast<Eigen::Index>(next)) =
            (history[i] + rules[i].newest_weight() * d).transpose();
      }
   }
   traj.d = D;
   return traj;
}

void Trajectory::write_csv(std::ostream &os) const
{
   const auto m = static_cast<Eigen::Index>(modes());
   std::string line = "t";
   for (Eigen::Index k = 1; k <= m; ++k) { line += ",d_" + std::to_string(k); }
   for (Eigen::Index k = 1; k <= m; ++k) { line += ",v_" + std::to_string(k); }
   line += ",E_kin,E_el,E_tot\n";
   os << line;
   for (std::size_t n = 0; n < times.size(); ++n)
   {
      line.clear();
      append_number(line, times[n]);
      const auto row = static_cast<Eigen::Index>(n);
      for (Eigen::Index k = 0; k < m; ++k)
      {
         line += ',';
         append_number(line, d(row, k));
      }
      for (Eigen::Index k = 0; k < m; ++k)
      {
         line += ',';
         append_number(line, v(row, k));
      }
      for (double e : {energy[n].kinetic, energy[n].elastic, energy[n].total})
      {
         line += ',';
         append_number(line, e);
      }
      line += '\n';
      os << line;
   }
}

DataNorms data_norms(const ModalSystem &sys, const Trajectory &traj)
{
   DataNorms norms;
   norms.u0_V = std::sqrt(sys.lambda().dot(sys.d0().cwiseProduct(sys.d0())));
   norms.v0_H = sys.v0().norm();
   const std::size_t M = sys.modes();
   const std::size_t N = traj.times.size();
   if (N < 2) { return norms; }

   auto channel = [&](const std::vector<LoadDescriptor> &ch, double t) {
      Eigen::VectorXd out(static_cast<Eigen::Index>(M));
      for (std::size_t k = 0; k < M; ++k) { out[static_cast<Eigen::Index>(k)] = ch[k].value(t); }
      return out;
   };
   double f2 = 0.0, g1 = 0.0, gdot1 = 0.0;
   Eigen::VectorXd f_prev = channel(sys.load().volume(), traj.times[0]);
   Eigen::VectorXd g_prev = channel(sys.load().surface(), traj.times[0]);
   for (std::size_t n = 1; n < N; ++n)
   {
      const double h = traj.times[n] - traj.times[n - 1];
      const Eigen::VectorXd f = channel(sys.load().volume(), traj.times[n]);
      const Eigen::VectorXd g = channel(sys.load().surface(), traj.times[n]);
      f2 += 0.5 * h * (f_prev.squaredNorm() + f.squaredNorm());
      g1 += 0.5 * h * (g_prev.norm() + g.norm());
      gdot1 += (g - g_prev).norm();
      f_prev = f;
      g_prev = g;
   }
   norms.f_L2 = std::sqrt(f2);
   norms.g_W11 = g1 + gdot1;
   return norms;
}

AprioriReport apriori_monitor(const ModalSystem &sys, const Trajectory &traj,
                              const DataNorms &norms, double growth_factor)
{
   AprioriReport rep;
   rep.data_aggregate = norms.aggregate();
   const std::size_t N = traj.times.size();
   if (N == 0) { return rep; }
   const double T = traj.times.back();
   double early = 0.0, late = 0.0, max_energy = 0.0;
   for (std::size_t n = 0; n < N; ++n)
   {
      const auto row = static_cast<Eigen::Index>(n);
      const Eigen::VectorXd d = traj.d.row(row).transpose();
      const double u_V = std::sqrt(sys.lambda().dot(d.cwiseProduct(d)));
      const double v_H = traj.v.row(row).norm();
      rep.sup_u_V = std::max(rep.sup_u_V, u_V);
      rep.sup_v_H = std::max(rep.sup_v_H, v_H);
      double &half = traj.times[n] < 0.5 * T ? early : late;
      half = std::max(half, u_V + v_H);
      max_energy = std::max(max_energy, traj.energy[n].total);
   }
   if (rep.data_aggregate > 0.0)
   {
      rep.bound_ratio = (rep.sup_u_V + rep.sup_v_H) / rep.data_aggregate;
   }
   rep.late_growth = early > 0.0 ? late / early : (late > 0.0 ? INFINITY : 0.0);
   rep.bounded = std::isfinite(rep.sup_u_V) && std::isfinite(rep.sup_v_H) &&
                 rep.late_growth <= growth_factor;
   const double kin0 = sys.rho() * sys.v0().squaredNorm();
   if (kin0 > 0.0) { rep.energy_to_initial_kinetic = max_energy / kin0; }
   return rep;
}

} // namespace fracvisc
