#include "owc/mac/error-model.h"

#include <stdexcept>

namespace owc::mac
{

ChannelErrorModel::ChannelErrorModel(const channel::ChannelState& state,
                                     const channel::ReceiverParams& receiver,
                                     const channel::FadingParams& fading)
    : m_state(state),
      m_receiver(receiver),
      m_fading(fading)
{
}

bool
ChannelErrorModel::DrawOutage(sim::RngStream& rng) const
{
    return channel::SampleOutage(m_state, m_receiver, m_fading, rng);
}

double
ChannelErrorModel::FrameLossProb(std::size_t bits) const
{
    if (!m_state.linkUp)
    {
        return 1.0;
    }
    return channel::FrameErrorProb(m_state.ber, bits);
}

ConstantErrorModel::ConstantErrorModel(double frameLossProb, double snr, bool linkUp)
    : m_p(frameLossProb),
      m_snr(snr),
      m_linkUp(linkUp)
{
    if (!(frameLossProb >= 0.0 && frameLossProb <= 1.0))
    {
        throw std::invalid_argument("frame loss probability must lie in [0, 1]");
    }
}

} // namespace owc::mac
