# Data models and schemas

