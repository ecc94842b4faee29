#include "qbgk/errors.hpp"

namespace qbgk {
namespace {

template <class E>
[[noreturn]] void again(const E& e, const std::string& where) {
  throw E(std::string(e.what()) + " (" + where + ")");
}

}  // namespace

void rethrow_located(const std::string& where) {
  try {
    throw;
  } catch (const FeasibilityError& e) {
    again(e, where);
  } catch (const ConvergenceError& e) {
    again(e, where);
  } catch (const BlowUpError& e) {
    again(e, where);
  } catch (const BoundarySolveError& e) {
    again(e, where);
  } catch (const DegenerateStateError& e) {
    again(e, where);
  } catch (const NumericalError& e) {
    again(e, where);
  } catch (const InvalidArgumentError& e) {
    again(e, where);
  } catch (const ConfigError& e) {
    again(e, where);
  }
}

}  // namespace qbgk
