#include "fracvisc/load_signal.hpp"

#include "fracvisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracvisc
{

namespace
{

template <class... Ts>
struct overloaded : Ts...
{
   using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

LoadDescriptor::LoadDescriptor(Variant v) : v_(std::move(v))
{
   if (const auto *tab = std::get_if<load::Table>(&v_))
   {
      if (tab->times.empty() || tab->times.size() != tab->values.size())
      {
         throw ValidationError("load table: times and values must be non-empty and equal length");
      }
      if (!std::is_sorted(tab->times.begin(), tab->times.end(), std::less_equal<>{}))
      {
         throw ValidationError("load table: times must be strictly increasing");
      }
   }
   if (const auto *step = std::get_if<load::Step>(&v_); step && step->t_on < 0.0)
   {
      throw ValidationError("load step: switch-on time must be >= 0");
   }
}

double LoadDescriptor::value(double t) const
{
   return std::visit(
      overloaded{
         [](const load::Zero &) { return 0.0; },
         [](const load::Constant &c) { return c.c; },
         [t](const load::Step &s) { return t >= s.t_on ? s.c : 0.0; },
         [t](const load::Sinusoid &s) { return s.amplitude * std::sin(s.omega * t + s.phase); },
         [t](const load::Exponential &e) { return e.amplitude * std::exp(-e.rate * t); },
         [t](const load::Table &tab) {
            if (t <= tab.times.front()) { return tab.values.front(); }
            if (t >= tab.times.back()) { return tab.values.back(); }
            const auto it = std::upper_bound(tab.times.begin(), tab.times.end(), t);
            const auto i = static_cast<std::size_t>(it - tab.times.begin());
            const double w = (t - tab.times[i - 1]) / (tab.times[i] - tab.times[i - 1]);
            return (1.0 - w) * tab.values[i - 1] + w * tab.values[i];
         }},
      v_);
}

double LoadDescriptor::derivative_at_zero(int order) const
{
   if (order < 0) { throw ValidationError("derivative order must be >= 0"); }
   if (order == 0) { return value(0.0); }
   return std::visit(
      overloaded{
         [](const load::Zero &) { return 0.0; },
         [](const load::Constant &) { return 0.0; },
         [](const load::Step &) { return 0.0; },
         [order](const load::Sinusoid &s) {
            // d^n sin(wt + p) = w^n sin(wt + p + n pi/2)
            return s.amplitude * std::pow(s.omega, order) *
                   std::sin(s.phase + order * 0.5 * std::numbers::pi);
         },
         [order](const load::Exponential &e) {
            return e.amplitude * std::pow(-e.rate, order);
         },
         [order](const load::Table &tab) {
            if (order > 1 || tab.times.size() < 2 || tab.times.front() > 0.0) { return 0.0; }
            const auto it = std::upper_bound(tab.times.begin(), tab.times.end(), 0.0);
            if (it == tab.times.end()) { return 0.0; }
            const auto i = static_cast<std::size_t>(it - tab.times.begin());
            return (tab.values[i] - tab.values[i - 1]) / (tab.times[i] - tab.times[i - 1]);
         }},
      v_);
}

std::optional<std::complex<double>> LoadDescriptor::laplace(std::complex<double> s) const
{
   using cplx = std::complex<double>;
   return std::visit(
      overloaded{
         [](const load::Zero &) -> std::optional<cplx> { return cplx{0.0}; },
         [s](const load::Constant &c) -> std::optional<cplx> { return c.c / s; },
         [s](const load::Step &st) -> std::optional<cplx> {
            return st.c * std::exp(-s * st.t_on) / s;
         },
         [s](const load::Sinusoid &si) -> std::optional<cplx> {
            // L{sin(wt + p)} = (s sin p + w cos p) / (s^2 + w^2)
            return si.amplitude * (s * std::sin(si.phase) + si.omega * std::cos(si.phase)) /
                   (s * s + si.omega * si.omega);
         },
         [s](const load::Exponential &e) -> std::optional<cplx> {
            return e.amplitude / (s + e.rate);
         },
         [](const load::Table &) -> std::optional<cplx> { return std::nullopt; }},
      v_);
}

LoadSignal::LoadSignal(std::vector<LoadDescriptor> volume, std::vector<LoadDescriptor> surface)
   : volume_(std::move(volume)), surface_(std::move(surface))
{
   if (volume_.size() != surface_.size())
   {
      throw ValidationError("LoadSignal: volume and surface channels differ in length");
   }
}

LoadSignal LoadSignal::zero(std::size_t m)
{
   return LoadSignal(std::vector<LoadDescriptor>(m), std::vector<LoadDescriptor>(m));
}

Eigen::VectorXd LoadSignal::value(double t) const
{
   Eigen::VectorXd out(static_cast<Eigen::Index>(modes()));
   for (std::size_t k = 0; k < modes(); ++k)
   {
      out[static_cast<Eigen::Index>(k)] = volume_[k].value(t) + surface_[k].value(t);
   }
   return out;
}

Eigen::VectorXd LoadSignal::derivative_at_zero(int order) const
{
   Eigen::VectorXd out(static_cast<Eigen::Index>(modes()));
   for (std::size_t k = 0; k < modes(); ++k)
   {
      out[static_cast<Eigen::Index>(k)] =
         volume_[k].derivative_at_zero(order) + surface_[k].derivative_at_zero(order);
   }
   return out;
}

std::optional<Eigen::VectorXcd> LoadSignal::laplace(std::complex<double> s) const
{
   Eigen::VectorXcd out(static_cast<Eigen::Index>(modes()));
   for (std::size_t k = 0; k < modes(); ++k)
   {
      const auto f = volume_[k].laplace(s);
      const auto g = surface_[k].laplace(s);
      if (!f || !g) { return std::nullopt; }
      out[static_cast<Eigen::Index>(k)] = *f + *g;
   }
   return out;
}

bool LoadSignal::transformable() const
{
   auto ok = [](const LoadDescriptor &d) { return d.transformable(); };
   return std::all_of(volume_.begin(), volume_.end(), ok) &&
          std::all_of(surface_.begin(), surface_.end(), ok);
}

bool LoadSignal::is_zero() const
{
   auto zero = [](const LoadDescriptor &d) { return d.is_zero(); };
   return std::all_of(volume_.begin(), volume_.end(), zero) &&
          std::all_of(surface_.begin(), surface_.end(), zero);
}

} // namespace fracvisc
