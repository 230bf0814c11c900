#ifndef CUTPLUG_IO_HPP
#define CUTPLUG_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "cutplug/driver.hpp"
#include "cutplug/lumped.hpp"

namespace cutplug {

// All CSV output uses 17 significant digits so doubles round-trip exactly.
std::string format_sig17(double v);

void write_lumped_csv(const std::vector<LumpedResponseRow>& rows,
                      std::ostream& out);  // f_hz,abs_p_pa

// f_hz,k,re_pout,im_pout,abs_pout,abs_ideal
void write_response_csv(const FrequencyResponse& resp, std::ostream& out);

// iter,J,grad_inf_norm,step
void write_history_csv(const std::vector<BfgsIterate>& history,
                       std::ostream& out);

// component,adjoint,fd,rel_err
void write_gradcheck_csv(const std::vector<GradCheckRow>& rows,
                         std::ostream& out);

// vertex_id,grad_value over free design vertices (vertex_id is the mesh id)
void write_design_gradient_csv(const DesignPoisson& poisson,
                               const Eigen::VectorXd& grad, std::ostream& out);

// vertex_id,value design-vector export; import validates the id set.
void write_design_csv(const DesignPoisson& poisson, const DesignVector& design,
                      std::ostream& out);
DesignVector read_design_csv(const DesignPoisson& poisson, std::istream& in,
                             const std::string& name = "<design>");

// Static line plot of |p_out| (and the ideal target) vs frequency, log-x.
void write_sweep_svg(const FrequencyResponse& resp, std::ostream& out);

}  // namespace cutplug

#endif
