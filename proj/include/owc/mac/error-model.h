#ifndef OWC_MAC_ERROR_MODEL_H
#define OWC_MAC_ERROR_MODEL_H

#include "owc/channel/optical-channel.h"
#include "owc/sim/rng.h"

#include <cstddef>

namespace owc::mac
{

/**
 * \brief Loss process seen by the MAC.
 *
 * An exchange first draws an outage (nothing gets through for its whole
 * duration); otherwise every on-air frame is lost independently with
 * FrameLossProb of its length.
 */
class ErrorModel
{
  public:
    virtual ~ErrorModel() = default;

    virtual bool LinkUp() const = 0;

    /// Linear electrical SNR used for rate selection.
    virtual double Snr() const = 0;

    virtual bool DrawOutage(sim::RngStream& rng) const = 0;

    virtual double FrameLossProb(std::size_t bits) const = 0;
};

/// Errors derived from a computed channel state and its fading parameters.
class ChannelErrorModel : public ErrorModel
{
  public:
    ChannelErrorModel(const channel::ChannelState& state, const channel::ReceiverParams& receiver,
                      const channel::FadingParams& fading);

    bool LinkUp() const override
    {
        return m_state.linkUp;
    }

    double Snr() const override
    {
        return m_state.snr;
    }

    bool DrawOutage(sim::RngStream& rng) const override;
    double FrameLossProb(std::size_t bits) const override;

    const channel::ChannelState& State() const
    {
        return m_state;
    }

  private:
    channel::ChannelState m_state;
    channel::ReceiverParams m_receiver;
    channel::FadingParams m_fading;
};

/// Fixed per-frame loss probability, no outages. Used to inject faults.
class ConstantErrorModel : public ErrorModel
{
  public:
    explicit ConstantErrorModel(double frameLossProb, double snr = 1e300, bool linkUp = true);

    bool LinkUp() const override
    {
        return m_linkUp;
    }

    double Snr() const override
    {
        return m_snr;
    }

    bool DrawOutage(sim::RngStream&) const override
    {
        return false;
    }

    double FrameLossProb(std::size_t) const override
    {
        return m_p;
    }

  private:
    double m_p;
    double m_snr;
    bool m_linkUp;
};

} // namespace owc::mac

#endif // OWC_MAC_ERROR_MODEL_H
