# Agentic RL rollout infrastructure: retail tool sandbox, rewards and advantages
# Main source package
