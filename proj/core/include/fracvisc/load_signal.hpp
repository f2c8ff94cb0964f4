#ifndef FRACVISC_LOAD_SIGNAL_HPP
#define FRACVISC_LOAD_SIGNAL_HPP

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <variant>
#include <vector>

namespace fracvisc
{

namespace load
{
struct Zero
{
};
struct Constant
{
   double c = 0.0;
};
/// c for t >= t_on, 0 before.
struct Step
{
   double c = 0.0;
   double t_on = 0.0;
};
/// amplitude * sin(omega t + phase)
struct Sinusoid
{
   double amplitude = 0.0;
   double omega = 0.0;
   double phase = 0.0;
};
/// amplitude * exp(-rate t)
struct Exponential
{
   double amplitude = 0.0;
   double rate = 0.0;
};
/// Linear interpolation between samples; held constant outside the table.
struct Table
{
   std::vector<double> times;
   std::vector<double> values;
};
} // namespace load

/// Closed-form or tabulated scalar signal of time.
class LoadDescriptor
{
public:
   using Variant = std::variant<load::Zero, load::Constant, load::Step, load::Sinusoid,
                                load::Exponential, load::Table>;

   LoadDescriptor() = default;
   /// Throws ValidationError for tables that are empty, ragged or not
   /// strictly increasing in time.
   LoadDescriptor(Variant v);

   double value(double t) const;

   /// d^order/dt^order at t = 0+. Tables are differentiated one-sided for
   /// order 1 and return 0 beyond.
   double derivative_at_zero(int order) const;

   /// Laplace transform, or nullopt for tables.
   std::optional<std::complex<double>> laplace(std::complex<double> s) const;

   bool transformable() const { return !std::holds_alternative<load::Table>(v_); }
   bool is_zero() const { return std::holds_alternative<load::Zero>(v_); }

   const Variant &variant() const { return v_; }

private:
   Variant v_ = load::Zero{};
};

/// Modal forcing F_k(t) = f_k(t) + g_k(t): volume channel f and surface
/// (Neumann) channel g, one descriptor per mode and channel.
class LoadSignal
{
public:
   LoadSignal() = default;
   /// Both channels must have the same length (the mode count).
   LoadSignal(std::vector<LoadDescriptor> volume, std::vector<LoadDescriptor> surface);

   /// All-zero load for m modes.
   static LoadSignal zero(std::size_t m);

   std::size_t modes() const { return volume_.size(); }
   const std::vector<LoadDescriptor> &volume() const { return volume_; }
   const std::vector<LoadDescriptor> &surface() const { return surface_; }

   Eigen::VectorXd value(double t) const;
   Eigen::VectorXd derivative_at_zero(int order) const;
   /// nullopt unless every channel is transformable.
   std::optional<Eigen::VectorXcd> laplace(std::complex<double> s) const;

   bool transformable() const;
   bool is_zero() const;

private:
   std::vector<LoadDescriptor> volume_;
   std::vector<LoadDescriptor> surface_;
};

} // namespace fracvisc

#endif // FRACVISC_LOAD_SIGNAL_HPP
